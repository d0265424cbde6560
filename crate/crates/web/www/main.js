import init, { newton, tree, certify } from "./pkg/arboreal_web.js";

const $ = (id) => document.getElementById(id);
const canvas = $("plot");
const ctx = canvas.getContext("2d");
const out = $("out");

function params() {
  return {
    poly: $("poly").value,
    prime: Number($("prime").value),
    base: $("base").value,
    depth: Number($("depth").value),
    horizon: Number($("horizon").value),
  };
}

// "a/b" or "inf" to a float; inf maps to null
function num(s) {
  if (s === "inf") return null;
  const [a, b] = s.split("/");
  return Number(a) / (b === undefined ? 1 : Number(b));
}

function clear() {
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  ctx.font = "12px ui-monospace, monospace";
  ctx.lineWidth = 1;
}

// maps data coordinates into the canvas with a margin
function frame(xs, ys) {
  const m = 40;
  const [x0, x1] = [Math.min(...xs), Math.max(...xs)];
  const [y0, y1] = [Math.min(...ys), Math.max(...ys)];
  const sx = (canvas.width - 2 * m) / Math.max(x1 - x0, 1);
  const sy = (canvas.height - 2 * m) / Math.max(y1 - y0, 1);
  ctx.strokeStyle = "#999";
  ctx.strokeRect(m, m, canvas.width - 2 * m, canvas.height - 2 * m);
  return (x, y) => [m + (x - x0) * sx, canvas.height - m - (y - y0) * sy];
}

function drawNewton(r) {
  clear();
  const pts = r.points.filter(([, v]) => v !== "inf").map(([i, v]) => [i, num(v)]);
  const at = frame(pts.map((p) => p[0]), pts.map((p) => p[1]));
  ctx.fillStyle = "#555";
  for (const [i, v] of pts) {
    const [x, y] = at(i, v);
    ctx.beginPath();
    ctx.arc(x, y, 3, 0, 2 * Math.PI);
    ctx.fill();
    ctx.fillText(`(${i}, ${v})`, x + 5, y - 5);
  }
  ctx.strokeStyle = "#c33";
  ctx.lineWidth = 2;
  ctx.beginPath();
  r.vertices.forEach(([i, v], k) => {
    const [x, y] = at(i, num(v));
    k === 0 ? ctx.moveTo(x, y) : ctx.lineTo(x, y);
  });
  ctx.stroke();
  ctx.fillStyle = "#c33";
  ctx.fillText(`slopes: ${r.segments.map((s) => s.slope).join(", ")}`, 48, 24);
}

function drawTree(r) {
  clear();
  const rows = r.levels;
  const h = (canvas.height - 60) / Math.max(rows.length - 1, 1);
  const pos = rows.map((row, k) =>
    row.map((_, j) => [((j + 1) * canvas.width) / (row.length + 1), 30 + k * h]),
  );
  ctx.strokeStyle = "#bbb";
  for (let k = 1; k < rows.length; k++) {
    pos[k].forEach(([x, y], j) => {
      const [px, py] = pos[k - 1][r.parents[k][j]];
      ctx.beginPath();
      ctx.moveTo(px, py);
      ctx.lineTo(x, y);
      ctx.stroke();
    });
  }
  rows.forEach((row, k) =>
    row.forEach((node, j) => {
      const [x, y] = pos[k][j];
      ctx.fillStyle = node.level_field === 1 ? "#36c" : "#c63";
      ctx.beginPath();
      ctx.arc(x, y, 2 + 2 * node.mult, 0, 2 * Math.PI);
      ctx.fill();
    }),
  );
  ctx.fillStyle = "#222";
  ctx.fillText(`${r.classification}; residues per level: ${r.counts.join(", ")}`, 10, canvas.height - 8);
}

function drawCertificate(c) {
  clear();
  ctx.fillStyle = c.verdict === "unresolved" ? "#a60" : "#282";
  ctx.font = "16px system-ui, sans-serif";
  ctx.fillText(`${c.verdict} (${c.branch})`, 40, 26);
  ctx.font = "12px ui-monospace, monospace";
  if (!c.bound) {
    ctx.fillStyle = "#222";
    ctx.fillText(c.unresolved_reason ?? "no bound for this branch", 40, 50);
    return;
  }
  // lower bound on e_n next to the p^(ell n) ceiling, log scale
  const pts = c.bound.curve.map(([n, b]) => [n, Math.log2(num(b))]);
  const top = pts.map(([n]) => [n, (c.ell ?? 0) * n * Math.log2(c.input.prime)]);
  const at = frame(pts.map((p) => p[0]), pts.concat(top).map((p) => p[1]));
  for (const [series, colour] of [[top, "#bbb"], [pts, "#36c"]]) {
    ctx.strokeStyle = colour;
    ctx.lineWidth = 2;
    ctx.beginPath();
    series.forEach(([n, y], k) => {
      const [px, py] = at(n, y);
      k === 0 ? ctx.moveTo(px, py) : ctx.lineTo(px, py);
    });
    ctx.stroke();
  }
  ctx.fillStyle = "#36c";
  ctx.fillText("log2 lower bound on e_n", 48, 60);
  ctx.fillStyle = "#999";
  ctx.fillText("log2 p^(ell n)", 48, 76);
}

const ops = {
  newton: (q) => [newton(q.poly, q.prime), drawNewton],
  tree: (q) => [tree(q.poly, q.prime, q.base, q.depth), drawTree],
  certify: (q) => [certify(q.poly, q.prime, q.base, q.depth, q.horizon), drawCertificate],
};

function run(op) {
  const [text, draw] = ops[op](params());
  const r = JSON.parse(text);
  out.textContent = JSON.stringify(r, null, 2);
  if (r.error) {
    clear();
    return;
  }
  draw(r);
}

await init();
out.textContent = "ready";
for (const b of document.querySelectorAll("nav button")) {
  b.addEventListener("click", () => run(b.dataset.op));
}
