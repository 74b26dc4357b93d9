import init, { bernoulli, fgm, two_point } from "./pkg/divkit_wasm.js";

const GENERATORS = ["kl", "kl-star", "tv", "hellinger", "pearson", "neyman", "lecam", "js", "alpha:0.5", "alpha:2"];

const $ = (id) => document.getElementById(id);

function fmt(v) {
  return typeof v === "number" ? v.toPrecision(8) : String(v);
}

// blue below 1, red above, white at density 1
function colour(d, max) {
  const x = Math.max(-1, Math.min(1, (d - 1) / Math.max(max - 1, 1e-9)));
  const a = Math.round(255 * (1 - Math.abs(x)));
  return x < 0 ? `rgb(${a},${a},255)` : `rgb(255,${a},${a})`;
}

function heatmap(canvas, uBreaks, vBreaks, density) {
  const ctx = canvas.getContext("2d");
  const { width: w, height: h } = canvas;
  const max = Math.max(...density.flat(), 1.0001);
  ctx.clearRect(0, 0, w, h);
  for (let i = 0; i < density.length; i++) {
    for (let j = 0; j < density[i].length; j++) {
      ctx.fillStyle = colour(density[i][j], max);
      const x0 = uBreaks[i] * w, x1 = uBreaks[i + 1] * w;
      const y0 = h - vBreaks[j + 1] * h, y1 = h - vBreaks[j] * h;
      ctx.fillRect(x0, y0, x1 - x0 + 0.5, y1 - y0 + 0.5);
    }
  }
}

function call(errId, f) {
  try {
    $(errId).textContent = "";
    return JSON.parse(f());
  } catch (e) {
    $(errId).textContent = e.message ?? String(e);
    return null;
  }
}

function updateBernoulli() {
  const [p, q, r] = ["bp", "bq", "br"].map((id) => {
    $(`${id}-out`).textContent = $(id).value;
    return Number($(id).value);
  });
  const rep = call("b-err", () => bernoulli(p, q, r));
  if (!rep) return;
  heatmap($("b-canvas"), rep.u_breaks, rep.v_breaks, rep.density);
  const rows = rep.indices.map((x) => `<tr><td>${x.generator}</td><td>${fmt(x.value)}</td></tr>`);
  rows.push(`<tr><th>mutual information</th><td>${fmt(rep.mutual_information)}</td></tr>`);
  $("b-table").innerHTML = `<tr><th>f</th><th>S_f</th></tr>${rows.join("")}`;
}

function updateFgm() {
  const theta = Number($("ft").value);
  $("ft-out").textContent = theta.toFixed(2);
  const k = 40;
  const rep = call("f-err", () => fgm(theta, $("ff").value, k, 128));
  if (!rep) return;
  const breaks = Array.from({ length: k + 1 }, (_, i) => i / k);
  heatmap($("f-canvas"), breaks, breaks, rep.density);
  let text = `D_f(independence || C) = ${fmt(rep.value)}`;
  if (rep.closed_form !== null) text += `, closed form ${fmt(rep.closed_form)}`;
  $("f-val").textContent = text;
}

function updateTwoPoint() {
  const t = Number($("tt").value);
  $("tt-out").textContent = t.toFixed(2);
  const rep = call("t-err", () => two_point(t, $("tf").value, 400));
  if (!rep) return;
  const canvas = $("t-canvas");
  const ctx = canvas.getContext("2d");
  const { width: w, height: h } = canvas;
  const finite = rep.divergence.filter((d) => typeof d === "number");
  const top = Math.min(Math.max(...finite), 10) || 1;
  ctx.clearRect(0, 0, w, h);
  ctx.strokeStyle = "#888";
  ctx.beginPath();
  ctx.moveTo(t * w, 0);
  ctx.lineTo(t * w, h);
  ctx.stroke();
  ctx.strokeStyle = "#0a5";
  ctx.lineWidth = 2;
  ctx.beginPath();
  rep.s.forEach((s, i) => {
    const d = typeof rep.divergence[i] === "number" ? rep.divergence[i] : top;
    const y = h - (Math.min(d, top) / top) * (h - 10);
    i === 0 ? ctx.moveTo(s * w, y) : ctx.lineTo(s * w, y);
  });
  ctx.stroke();
  ctx.fillStyle = "#222";
  ctx.fillText(`max shown ${fmt(top)}`, 6, 12);
}

function fillSelect(id, initial) {
  $(id).innerHTML = GENERATORS.map((g) => `<option${g === initial ? " selected" : ""}>${g}</option>`).join("");
}

await init();
fillSelect("ff", "pearson");
fillSelect("tf", "kl");
for (const id of ["bp", "bq", "br"]) $(id).addEventListener("input", updateBernoulli);
for (const id of ["ft", "ff"]) $(id).addEventListener("input", updateFgm);
for (const id of ["tt", "tf"]) $(id).addEventListener("input", updateTwoPoint);
updateBernoulli();
updateFgm();
updateTwoPoint();
