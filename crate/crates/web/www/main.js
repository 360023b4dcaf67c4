import init, { generate, quality_curve, tm_chain } from "./pkg/plc_web.js";

const $ = (id) => document.getElementById(id);

function fail(target, err) {
  target.innerHTML = "";
  const p = document.createElement("p");
  p.className = "error";
  p.textContent = String(err.message ?? err);
  target.appendChild(p);
}

// marks[i] is the css class for letter i, later ranges win
function renderWord(target, word, ranges) {
  const marks = new Array(word.length).fill("");
  for (const [start, len, cls] of ranges) {
    for (let i = start; i < start + len && i < word.length; i++) marks[i] = cls;
  }
  target.innerHTML = "";
  for (let i = 0; i < word.length; i++) {
    const span = document.createElement("span");
    span.textContent = word[i];
    if (marks[i]) span.className = marks[i];
    target.appendChild(span);
  }
}

function runGenerate() {
  const out = $("g-word");
  try {
    const r = JSON.parse(generate($("g-rules").value, $("g-start").value, Number($("g-len").value), Number($("g-p").value)));
    const ranges = [];
    for (const s of r.squares) {
      ranges.push([s.position, s.period_word.length * s.whole_repeats + s.frac_len, "sq"]);
    }
    for (const o of r.overlaps) ranges.push([o.position, 2 * (1 + o.X.length) + 1, "ov"]);
    renderWord(out, r.word, ranges);
    $("g-certs").textContent = r.certificates === null
      ? "word is not over the digits of base p"
      : JSON.stringify(r.certificates, null, 2);
  } catch (e) {
    fail(out, e);
    $("g-certs").textContent = "";
  }
}

function runQuality() {
  const svg = $("q-plot");
  try {
    const r = JSON.parse(quality_curve($("q-digits").value, Number($("q-p").value), Number($("q-max").value), Number($("q-k").value)));
    const w = svg.width.baseVal.value, h = svg.height.baseVal.value;
    const top = Math.max(...r.points.map((pt) => pt.hi), 1e-12);
    const x = (q) => ((q - 0.5) / r.points.length) * w;
    const y = (v) => h - (v / top) * (h - 10);
    const bar = w / r.points.length;
    let body = "";
    let running = Infinity;
    const line = [];
    for (const pt of r.points) {
      body += `<rect x="${x(pt.q) - bar / 2}" y="${y(pt.hi)}" width="${Math.max(bar - 1, 1)}" height="${Math.max(y(pt.lo) - y(pt.hi), 1)}" fill="#a1a1aa"/>`;
      running = Math.min(running, pt.hi);
      line.push(`${x(pt.q)},${y(running)}`);
    }
    body += `<polyline points="${line.join(" ")}" fill="none" stroke="#2563eb" stroke-width="2"/>`;
    svg.innerHTML = body;
    $("q-best").textContent = `best q = ${r.best.q}, upper end ${r.best.hi} ≈ ${r.best.hi_approx.toExponential(4)}`;
  } catch (e) {
    svg.innerHTML = "";
    fail($("q-best"), e);
  }
}

function runChain() {
  const view = $("t-word-view");
  try {
    const word = $("t-word").value.replace(/\s+/g, "");
    const r = JSON.parse(tm_chain(word));
    renderWord(view, word, [[r.chain.offset, r.chain.tm_prefix_len, "tm"]]);
    $("t-chain").textContent = JSON.stringify(r.chain, null, 2);
  } catch (e) {
    fail(view, e);
    $("t-chain").textContent = "";
  }
}

await init();
$("g-run").addEventListener("click", runGenerate);
$("q-run").addEventListener("click", runQuality);
$("t-run").addEventListener("click", runChain);
runGenerate();
runQuality();
runChain();
