import init, { cubeProfile, maximalCurves, constantsTable } from "./pkg/maxmod_demo.js";

const $ = (id) => document.getElementById(id);

function showError(e) {
  $("error").textContent = String(e && e.message ? e.message : e);
}

function plot(canvas, xs, series, yRange) {
  const ctx = canvas.getContext("2d");
  const w = canvas.width, h = canvas.height, pad = 36;
  ctx.clearRect(0, 0, w, h);
  const x0 = xs[0], x1 = xs[xs.length - 1];
  const [y0, y1] = yRange;
  const px = (x) => pad + ((x - x0) / (x1 - x0)) * (w - 2 * pad);
  const py = (y) => h - pad - ((y - y0) / (y1 - y0)) * (h - 2 * pad);

  ctx.strokeStyle = "#bbb";
  ctx.fillStyle = "#555";
  ctx.font = "11px sans-serif";
  ctx.beginPath();
  ctx.moveTo(pad, py(y0)); ctx.lineTo(w - pad, py(y0));
  ctx.moveTo(pad, py(y0)); ctx.lineTo(pad, py(y1));
  ctx.stroke();
  ctx.fillText(x0.toFixed(2), pad - 4, h - pad + 14);
  ctx.fillText(x1.toFixed(2), w - pad - 20, h - pad + 14);
  ctx.fillText(y0.toFixed(3), 2, py(y0));
  ctx.fillText(y1.toFixed(3), 2, py(y1) + 10);

  for (const { ys, color } of series) {
    ctx.strokeStyle = color;
    ctx.lineWidth = 1.5;
    ctx.beginPath();
    ys.forEach((y, i) => (i ? ctx.lineTo(px(xs[i]), py(y)) : ctx.moveTo(px(xs[i]), py(y))));
    ctx.stroke();
  }
  return { px, py };
}

function drawProfile() {
  const alpha = +$("p-alpha").value, d = +$("p-dim").value, n = 401;
  $("p-alpha-v").textContent = alpha.toFixed(2);
  $("p-dim-v").textContent = d;
  try {
    const out = cubeProfile(alpha, d, n);
    const ys = Array.from(out.subarray(0, n));
    const [sStar, best] = [out[n], out[n + 1]];
    const xs = ys.map((_, i) => i / (n - 1));
    const lo = Math.min(...ys), hi = Math.max(...ys);
    const margin = (hi - lo) * 0.05 || 0.01;
    const canvas = $("profile");
    const { px, py } = plot(canvas, xs, [{ ys, color: "#c33" }], [lo - margin, hi + margin]);
    const ctx = canvas.getContext("2d");
    ctx.fillStyle = "#000";
    ctx.beginPath();
    ctx.arc(px(sStar), py(best), 4, 0, 2 * Math.PI);
    ctx.fill();
    $("profile-info").textContent = `minimum ${best.toFixed(12)} at s = ${sStar.toFixed(9)}`;
    $("error").textContent = "";
  } catch (e) {
    showError(e);
  }
}

function drawCurves() {
  const alpha = +$("c-alpha").value, width = +$("c-width").value, n = 1201;
  $("c-alpha-v").textContent = alpha.toFixed(2);
  $("c-width-v").textContent = width.toFixed(1);
  try {
    const out = maximalCurves(alpha, width, n);
    const part = (k) => Array.from(out.subarray(k * n, (k + 1) * n));
    const xs = part(0);
    plot($("curves"), xs, [
      { ys: part(1), color: "#888" },
      { ys: part(3), color: "#36c" },
      { ys: part(2), color: "#c33" },
    ], [0, 1.02]);
    $("error").textContent = "";
  } catch (e) {
    showError(e);
  }
}

function fillTable() {
  const alpha = +$("t-alpha").value, maxD = +$("t-dim").value;
  const table = $("table");
  try {
    const rows = JSON.parse(constantsTable(alpha, maxD));
    const head = "<tr><th>d</th><th>cube</th><th>ball</th><th>cross-polytope</th><th>ball ceiling</th></tr>";
    const body = rows
      .map((r) => `<tr><td>${r.d}</td><td>${r.linf.toFixed(9)}</td><td>${r.l2.toFixed(9)}</td>` +
        `<td>${r.l1.toFixed(9)}</td><td>${r.l2_ceiling.toFixed(9)}</td></tr>`)
      .join("");
    table.innerHTML = head + body;
    $("error").textContent = "";
  } catch (e) {
    showError(e);
  }
}

await init();
for (const id of ["p-alpha", "p-dim"]) $(id).addEventListener("input", drawProfile);
for (const id of ["c-alpha", "c-width"]) $(id).addEventListener("input", drawCurves);
$("t-run").addEventListener("click", fillTable);
drawProfile();
drawCurves();
fillTable();
