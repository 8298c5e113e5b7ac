import init, { axis_slots, score_table, extract, decision_surface } from "./pkg/mwe_demo.js";

const $ = (id) => document.getElementById(id);
const words = (s) => s.split(/\s+/).filter(Boolean).join("\n");
const fmt = (x) => (Number.isInteger(x) ? String(x) : x.toFixed(6));

function escape(s) {
  return String(s).replace(/[&<>"]/g, (c) => ({ "&": "&amp;", "<": "&lt;", ">": "&gt;", '"': "&quot;" })[c]);
}

function table(headers, rows) {
  const head = headers.map((h) => `<th>${escape(h)}</th>`).join("");
  const body = rows.map((r) => `<tr>${r.map((c) => `<td>${escape(c)}</td>`).join("")}</tr>`).join("");
  return `<table><tr>${head}</tr>${body}</table>`;
}

function showError(el, v) {
  el.innerHTML = `<p class="error">${escape(v.error)}</p>`;
}

function runAssoc() {
  const n = ["n11", "n1p", "np1", "n"].map((id) => Math.max(0, Number($(id).value) | 0));
  const v = JSON.parse(score_table(...n));
  const out = $("assoc-out");
  if (v.error) return showError(out, v);
  const t = v.table;
  const cells = table(
    ["", "w2", "not w2", "total"],
    [
      ["w1", `${t.n11} (${fmt(t.m11)})`, `${t.n12} (${fmt(t.m12)})`, t.n1p],
      ["not w1", `${t.n21} (${fmt(t.m21)})`, `${t.n22} (${fmt(t.m22)})`, t.n2p],
      ["total", t.np1, t.np2, t.n],
    ],
  );
  const scores = table(["measure", "value"], Object.entries(v.scores).map(([k, x]) => [k, fmt(x)]));
  out.innerHTML = `<p>Observed (expected) counts</p>${cells}${scores}`;
}

function runExtract() {
  const v = JSON.parse(
    extract($("chunks").value, $("raw").value, words($("suffixes").value), words($("numbers").value), words($("lexicon").value)),
  );
  const out = $("extract-out");
  if (v.error) return showError(out, v);
  const rows = v.candidates.map((c) => [c.w1, c.w2, `${c.stem1} ${c.stem2}`, c.occurrences, c.flags, `${c.tag1},${c.tag2}`]);
  out.innerHTML = `<p>${v.sentences} sentences, ${rows.length} candidates</p>` + table(["w1", "w2", "stems", "count", "flags", "tags"], rows);
}

const points = [];
const RES = 40;

function draw(grid) {
  const canvas = $("canvas");
  const ctx = canvas.getContext("2d");
  const w = canvas.width;
  const h = canvas.height;
  ctx.clearRect(0, 0, w, h);
  if (grid) {
    const cell = w / RES;
    grid.forEach((row, r) =>
      row.forEach((p, c) => {
        const red = Math.round(255 * (1 - p));
        const blue = Math.round(255 * p);
        ctx.fillStyle = `rgba(${red}, 120, ${blue}, 0.35)`;
        ctx.fillRect(c * cell, h - (r + 1) * cell, cell + 1, cell + 1);
      }),
    );
  }
  for (const p of points) {
    ctx.beginPath();
    ctx.arc(p.x * w, h - p.y * h, 5, 0, 2 * Math.PI);
    ctx.fillStyle = p.positive ? "#1546c8" : "#c81515";
    ctx.fill();
    ctx.strokeStyle = "#fff";
    ctx.stroke();
  }
}

function runSurface() {
  const out = $("surface-out");
  if (points.length === 0) {
    out.textContent = "No points yet.";
    return draw(null);
  }
  const trees = Math.min(200, Math.max(1, Number($("trees").value) | 0));
  const seed = Math.max(0, Number($("seed").value) | 0);
  const v = JSON.parse(decision_surface(JSON.stringify(points), Number($("xslot").value), Number($("yslot").value), trees, seed, RES));
  if (v.error) {
    out.innerHTML = `<span class="error">${escape(v.error)}</span>`;
    return draw(null);
  }
  draw(v.grid);
  const oob = v.oob_instances ? `OOB error ${v.oob_error.toFixed(3)} over ${v.oob_instances} points` : "no out-of-bag points";
  out.textContent = `${points.length} points, K=${v.features_per_node}, ${oob}, training errors ${v.training_errors}, tree depths ${v.tree_depths.join(" ")}`;
}

async function main() {
  await init();
  for (const id of ["n11", "n1p", "np1", "n"]) $(id).addEventListener("input", runAssoc);
  runAssoc();
  $("run-extract").addEventListener("click", runExtract);
  runExtract();

  const slots = JSON.parse(axis_slots());
  for (const [id, chosen] of [["xslot", 0], ["yslot", 1]]) {
    const sel = $(id);
    slots.forEach((name, i) => sel.add(new Option(name, i, false, i === chosen)));
    sel.addEventListener("change", runSurface);
  }
  for (const id of ["trees", "seed"]) $(id).addEventListener("change", runSurface);
  $("canvas").addEventListener("click", (e) => {
    const r = e.target.getBoundingClientRect();
    points.push({ x: (e.clientX - r.left) / r.width, y: 1 - (e.clientY - r.top) / r.height, positive: !e.shiftKey });
    runSurface();
  });
  $("clear").addEventListener("click", () => {
    points.length = 0;
    runSurface();
  });
  runSurface();
}

main();
