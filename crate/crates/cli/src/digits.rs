use std::fs;
use std::io::Read;
use std::path::Path;

use plc_core::arithmetic::{check_base, check_digits};
use plc_core::Word;

use crate::CliError;

/// Reads `path` (or stdin for `-`) as raw text.
pub fn read_input(path: &Path) -> Result<String, CliError> {
    if path.as_os_str() == "-" {
        let mut text = String::new();
        std::io::stdin()
            .read_to_string(&mut text)
            .map_err(|e| CliError::Validation(format!("stdin: {e}")))?;
        Ok(text)
    } else {
        fs::read_to_string(path).map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))
    }
}

/// Strips whitespace and checks every remaining byte is a digit below `p`.
pub fn parse_digits(text: &str, p: u32) -> Result<Word, CliError> {
    check_base(p)?;
    let bytes: Vec<u8> = text.bytes().filter(|c| !c.is_ascii_whitespace()).collect();
    if let Some(pos) = bytes.iter().position(|c| !c.is_ascii_digit()) {
        return Err(CliError::Validation(format!(
            "non-digit byte 0x{:02x} at offset {pos}",
            bytes[pos]
        )));
    }
    check_digits(&bytes, p)?;
    Ok(Word::from_bytes(bytes)?)
}

pub fn digits_io(path: &Path, p: u32) -> Result<Word, CliError> {
    parse_digits(&read_input(path)?, p)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strips_whitespace() {
        assert_eq!(parse_digits("0110\n1001", 2).unwrap().as_str(), "01101001");
        assert_eq!(parse_digits(" 2 1\t0\r\n", 3).unwrap().as_str(), "210");
    }

    #[test]
    fn rejects_digit_out_of_range() {
        assert!(matches!(parse_digits("2", 2), Err(CliError::Validation(_))));
    }

    #[test]
    fn rejects_non_digit() {
        let err = parse_digits("01a1", 2).unwrap_err();
        assert!(err.to_string().contains("0x61"), "{err}");
    }

    #[test]
    fn empty_is_accepted() {
        assert!(parse_digits("", 2).unwrap().is_empty());
        assert!(parse_digits(" \n", 7).unwrap().is_empty());
    }

    #[test]
    fn base_is_validated() {
        assert!(parse_digits("0", 1).is_err());
        assert!(parse_digits("0", 11).is_err());
    }

    #[test]
    fn reads_files() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("d.txt");
        fs::write(&path, "01 10\n").unwrap();
        assert_eq!(digits_io(&path, 2).unwrap().as_str(), "0110");
        assert!(digits_io(&dir.path().join("missing"), 2).is_err());
    }
}
