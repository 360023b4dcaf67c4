//! Thue–Morse words: `μ`-decompositions of overlap-free binary words,
//! iterated decomposition chains with the extracted `μ^k(a)` block, the
//! constants `TM(a, b)_n` and their digitwise affine identities.

use serde::{Deserialize, Serialize};

use crate::arithmetic::{check_base, prefix_value, BigRational};
use crate::error::{Error, Result};
use crate::repetitions::{find_overlaps, is_overlap_free, overlap_suffix};
use crate::words::{complement, Letter, Word};

fn check_binary(x: &[Letter]) -> Result<()> {
    if x.iter().all(|&c| c == b'0' || c == b'1') {
        Ok(())
    } else {
        Err(Error::NotBinary)
    }
}

/// `μ(y)` with `0 → 01`, `1 → 10`.
pub fn mu(y: &[Letter]) -> Result<Word> {
    check_binary(y)?;
    Ok(y.iter()
        .flat_map(|&c| if c == b'0' { *b"01" } else { *b"10" })
        .collect())
}

pub fn mu_pow(y: &[Letter], k: usize) -> Result<Word> {
    let mut w = Word::from(y);
    for _ in 0..k {
        w = mu(&w)?;
    }
    Ok(w)
}

/// `M[..n]`, using `M[i] = popcount(i) mod 2`.
pub fn thue_morse_prefix(n: usize) -> Word {
    (0..n).map(|i| b'0' + (i.count_ones() % 2) as u8).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Decomposition {
    pub u: Word,
    pub y: Word,
    pub v: Word,
}

impl Decomposition {
    pub fn reassemble(&self) -> Word {
        let mut w = self.u.clone();
        w.extend_from_slice(&mu(&self.y).expect("binary core"));
        w.extend_from_slice(&self.v);
        w
    }
}

/// `x = u·μ(y)·v` with `|u|, |v| ≤ 2`, maximizing `|y|` and then
/// minimizing `|u|`.
pub fn decompose(x: &[Letter]) -> Result<Decomposition> {
    check_binary(x)?;
    if x.is_empty() {
        return Err(Error::EmptyWord);
    }
    if let Some(o) = find_overlaps(x, 1).into_iter().next() {
        return Err(Error::ContainsOverlap { position: o.position });
    }
    decompose_unchecked(x)
}

fn decompose_unchecked(x: &[Letter]) -> Result<Decomposition> {
    let n = x.len();
    let mut best: Option<(usize, usize)> = None;
    for lu in 0..=2.min(n) {
        for lv in 0..=2.min(n - lu) {
            let mid = &x[lu..n - lv];
            if !mid.len().is_multiple_of(2) || !mid.chunks(2).all(|p| p[0] != p[1]) {
                continue;
            }
            let ly = mid.len() / 2;
            if best.is_none_or(|(by, bu)| ly > by || (ly == by && lu < bu)) {
                best = Some((ly, lu));
            }
        }
    }
    let (ly, lu) = best.ok_or_else(|| Error::Internal(format!("no decomposition of {}", Word::from(x))))?;
    let mid = &x[lu..lu + 2 * ly];
    Ok(Decomposition {
        u: Word::from(&x[..lu]),
        y: mid.iter().step_by(2).copied().collect(),
        v: Word::from(&x[lu + 2 * ly..]),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MuOverlapFree {
    pub y_free: bool,
    pub mu_y_free: bool,
}

pub fn mu_preserves_overlap_free(y: &[Letter]) -> Result<MuOverlapFree> {
    let image = mu(y)?;
    Ok(MuOverlapFree {
        y_free: is_overlap_free(y),
        mu_y_free: is_overlap_free(&image),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum TmReference {
    /// `M`, fixed point from 0.
    #[serde(rename = "M")]
    M,
    /// `M̃`, fixed point from 1.
    #[serde(rename = "M~")]
    Complement,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainLevel {
    pub u: Word,
    pub v: Word,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionChain {
    pub levels: Vec<ChainLevel>,
    pub core: Word,
    pub depth: usize,
    pub letter: Word,
    pub tm_prefix_len: usize,
    /// Start of `μ^depth(letter)` inside the input.
    pub offset: usize,
    pub reference: TmReference,
}

impl DecompositionChain {
    /// `u_1 μ(u_2) … μ^(k-1)(u_k) μ^k(y_k) μ^(k-1)(v_k) … v_1`.
    pub fn reassemble(&self) -> Word {
        let mut w = mu_pow(&self.core, self.depth).expect("binary core");
        for (j, level) in self.levels.iter().enumerate().rev() {
            let mut out = mu_pow(&level.u, j).expect("binary");
            out.extend_from_slice(&w);
            out.extend_from_slice(&mu_pow(&level.v, j).expect("binary"));
            w = out;
        }
        w
    }

    /// The extracted block literally occurs at `offset` in `x` and equals the
    /// length-`2^k` prefix of the reported Thue–Morse word.
    pub fn verify(&self, x: &[Letter]) -> bool {
        let block = mu_pow(&self.letter, self.depth).expect("binary letter");
        let mut reference = thue_morse_prefix(self.tm_prefix_len);
        if self.reference == TmReference::Complement {
            reference = complement(&reference, 2).expect("binary");
        }
        block.len() == self.tm_prefix_len
            && self.offset + block.len() <= x.len()
            && x[self.offset..self.offset + block.len()] == block[..]
            && block == reference
    }
}

/// `max(0, ⌊log₂(K + 4)⌋ - 2)`.
pub fn chain_depth(len: usize) -> usize {
    let bits = usize::BITS - (len + 4).leading_zeros() - 1;
    (bits as usize).saturating_sub(2)
}

/// Decomposes `depth` times and reads `μ^depth(a)` off the leftmost letter
/// `a` of the deepest core.
pub fn extract_tm_prefix(x: &[Letter]) -> Result<DecompositionChain> {
    check_binary(x)?;
    if x.is_empty() {
        return Err(Error::EmptyWord);
    }
    if let Some(o) = find_overlaps(x, 1).into_iter().next() {
        return Err(Error::ContainsOverlap { position: o.position });
    }
    let depth = chain_depth(x.len());
    let mut levels = Vec::with_capacity(depth);
    let mut core = Word::from(x);
    let mut offset = 0;
    for j in 0..depth {
        let d = decompose_unchecked(&core)?;
        offset += d.u.len() << j;
        levels.push(ChainLevel { u: d.u, v: d.v });
        core = d.y;
    }
    let letter = *core
        .first()
        .ok_or_else(|| Error::Internal(format!("empty core at depth {depth} for {}", Word::from(x))))?;
    let chain = DecompositionChain {
        levels,
        core,
        depth,
        letter: Word::from(&[letter][..]),
        tm_prefix_len: 1 << depth,
        offset,
        reference: if letter == b'0' { TmReference::M } else { TmReference::Complement },
    };
    if !chain.verify(x) {
        return Err(Error::Internal("extracted block does not occur".into()));
    }
    Ok(chain)
}

/// Length-`len` prefix of `TM(a, b)`, the coding `0 → a`, `1 → b` of `M`.
pub fn tm_coding_prefix(a: u32, b: u32, n: u32, len: usize) -> Result<Word> {
    check_base(n)?;
    for d in [a, b] {
        if d >= n {
            return Err(Error::DigitOutOfRange { letter: char::from_digit(d, 36).unwrap_or('?'), base: n });
        }
    }
    let (ca, cb) = (b'0' + a as u8, b'0' + b as u8);
    Ok(thue_morse_prefix(len)
        .iter()
        .map(|&c| if c == b'0' { ca } else { cb })
        .collect())
}

/// Truncation of `TM(a, b)_n` to `len` digits.
pub fn tm_constant(a: u32, b: u32, n: u32, len: usize) -> Result<BigRational> {
    if len == 0 {
        return Err(Error::InvalidArgument("L must be at least 1".into()));
    }
    prefix_value(&tm_coding_prefix(a, b, n, len)?, n)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "identity", rename_all = "lowercase")]
pub enum Identity {
    /// `r·TM(0,1) = TM(0,r)`.
    Scale { r: u32 },
    /// `(n-1)/(n-1) - TM(0,n-1) = TM(n-1,0)`.
    Complement,
    /// `TM(0,k) + ℓ/(n-1) = TM(ℓ,ℓ+k)`.
    Affine { k: u32, l: u32 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityCheck {
    #[serde(flatten)]
    pub identity: Identity,
    pub pass: bool,
}

/// Every admissible instance of the three identities, checked exactly on
/// `len`-digit truncations. The constant `ℓ/(n-1)` truncates to the
/// all-`ℓ` word.
pub fn tm_identity_suite(n: u32, len: usize) -> Result<Vec<IdentityCheck>> {
    check_base(n)?;
    if len == 0 {
        return Err(Error::InvalidArgument("L must be at least 1".into()));
    }
    let tm = |a, b| tm_constant(a, b, n, len);
    let repdigit = |l: u32| prefix_value(&vec![b'0' + l as u8; len], n);
    let mut out = Vec::new();
    let base = tm(0, 1)?;
    for r in 0..n {
        let lhs = &base * BigRational::from_integer(r.into());
        out.push(IdentityCheck { identity: Identity::Scale { r }, pass: lhs == tm(0, r)? });
    }
    let top = n - 1;
    let digits_ok = complement(&tm_coding_prefix(0, top, n, len)?, n)? == tm_coding_prefix(top, 0, n, len)?;
    let value_ok = repdigit(top)? - tm(0, top)? == tm(top, 0)?;
    out.push(IdentityCheck { identity: Identity::Complement, pass: digits_ok && value_ok });
    for k in 0..n {
        for l in 0..n - k {
            let lhs = tm(0, k)? + repdigit(l)?;
            out.push(IdentityCheck { identity: Identity::Affine { k, l }, pass: lhs == tm(l, l + k)? });
        }
    }
    Ok(out)
}

/// All overlap-free binary words of length `len`, in lexicographic order.
pub fn overlap_free_words(len: usize) -> Vec<Word> {
    let mut out = Vec::new();
    for_each_overlap_free(len, |w| {
        if w.len() == len {
            out.push(Word::from(w));
        }
    });
    out
}

/// Calls `f` on every non-empty overlap-free binary word of length at most
/// `max_len`, depth first and lexicographically.
pub fn for_each_overlap_free(max_len: usize, mut f: impl FnMut(&[Letter])) {
    fn go(w: &mut Vec<Letter>, max_len: usize, f: &mut dyn FnMut(&[Letter])) {
        if w.len() == max_len {
            return;
        }
        for c in *b"01" {
            w.push(c);
            if overlap_suffix(w).is_none() {
                f(w);
                go(w, max_len, f);
            }
            w.pop();
        }
    }
    let mut w = Vec::with_capacity(max_len);
    go(&mut w, max_len, &mut f);
}

/// Extends the overlap-free word `start` to length `len` by depth-first
/// search, trying letters in the order chosen by `coin` (true puts `1`
/// first). `None` when every branch dies.
pub fn overlap_free_extension(start: &[Letter], len: usize, mut coin: impl FnMut() -> bool) -> Option<Word> {
    fn go(w: &mut Vec<Letter>, len: usize, coin: &mut dyn FnMut() -> bool) -> bool {
        if w.len() >= len {
            return true;
        }
        let order = if coin() { *b"10" } else { *b"01" };
        for c in order {
            w.push(c);
            if overlap_suffix(w).is_none() && go(w, len, coin) {
                return true;
            }
            w.pop();
        }
        false
    }
    if check_binary(start).is_err() || !is_overlap_free(start) {
        return None;
    }
    let mut w = start.to_vec();
    go(&mut w, len, &mut coin).then(|| Word::from(&w[..]))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dec(u: &str, y: &str, v: &str) -> Decomposition {
        Decomposition { u: u.into(), y: y.into(), v: v.into() }
    }

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn prefixes() {
        assert_eq!(thue_morse_prefix(16).as_str(), "0110100110010110");
        assert_eq!(mu_pow(b"0", 4).unwrap(), thue_morse_prefix(16));
        assert_eq!(mu(b"01").unwrap().as_str(), "0110");
        assert!(mu(b"012").is_err());
    }

    #[test]
    fn decompositions() {
        assert_eq!(decompose(b"0110").unwrap(), dec("", "01", ""));
        assert_eq!(decompose(b"011").unwrap(), dec("", "0", "1"));
        assert_eq!(decompose(b"0").unwrap(), dec("", "", "0"));
        assert_eq!(decompose(b"00100").unwrap(), dec("0", "0", "00"));
        assert!(matches!(decompose(b"01010"), Err(Error::ContainsOverlap { position: 0 })));
        assert!(matches!(decompose(b"0120"), Err(Error::NotBinary)));
        assert!(matches!(decompose(b""), Err(Error::EmptyWord)));
    }

    #[test]
    fn mu_flags() {
        let f = |y: &str| mu_preserves_overlap_free(y.as_bytes()).unwrap();
        assert_eq!(f("01"), MuOverlapFree { y_free: true, mu_y_free: true });
        assert_eq!(f("000"), MuOverlapFree { y_free: false, mu_y_free: false });
        assert_eq!(f("0110100110010110"), MuOverlapFree { y_free: true, mu_y_free: true });
    }

    #[test]
    fn depths() {
        assert_eq!(chain_depth(1), 0);
        assert_eq!(chain_depth(3), 0);
        assert_eq!(chain_depth(4), 1);
        assert_eq!(chain_depth(32), 3);
        assert_eq!(chain_depth(60), 4);
    }

    #[test]
    fn extraction() {
        let x = thue_morse_prefix(32);
        let c = extract_tm_prefix(&x).unwrap();
        assert_eq!((c.depth, c.tm_prefix_len), (3, 8));
        assert!(c.verify(&x));
        assert_eq!(c.reassemble(), x);

        let c = extract_tm_prefix(b"0").unwrap();
        assert_eq!((c.depth, c.tm_prefix_len, c.offset), (0, 1, 0));
        let c = extract_tm_prefix(b"1").unwrap();
        assert_eq!(c.reference, TmReference::Complement);

        let x = b"1001011001101001";
        let c = extract_tm_prefix(x).unwrap();
        assert_eq!(c.reassemble().as_bytes(), x);
        assert!(c.tm_prefix_len * 8 >= x.len() + 4);
    }

    #[test]
    fn constants() {
        assert_eq!(tm_constant(0, 1, 2, 4).unwrap(), r(3, 8));
        assert_eq!(tm_constant(1, 0, 2, 4).unwrap(), r(9, 16));
        assert_eq!(tm_constant(0, 0, 3, 7).unwrap(), r(0, 1));
        assert!(tm_constant(0, 3, 3, 4).is_err());
    }

    #[test]
    fn identities() {
        let find = |n, len, id| {
            tm_identity_suite(n, len)
                .unwrap()
                .into_iter()
                .find(|c| c.identity == id)
                .unwrap()
                .pass
        };
        assert!(find(3, 8, Identity::Scale { r: 2 }));
        assert!(find(2, 16, Identity::Complement));
        assert!(find(5, 10, Identity::Affine { k: 2, l: 2 }));
        assert_eq!(
            complement(&tm_coding_prefix(0, 1, 2, 16).unwrap(), 2).unwrap().as_str(),
            "1001011001101001"
        );
    }

    #[test]
    fn small_census() {
        let counts: Vec<usize> = (1..=10).map(|n| overlap_free_words(n).len()).collect();
        assert_eq!(counts, vec![2, 4, 6, 10, 14, 20, 24, 30, 36, 44]);
    }
}
