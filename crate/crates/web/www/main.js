import init, { propagator_curves, decay_series, torus_snapshot, version } from "./pkg/liewave_web.js";

const COLORS = ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e"];
const $ = (id) => document.getElementById(id);

// rows of `cols` numbers -> columns
function columns(flat, cols) {
  const n = flat.length / cols;
  const out = Array.from({ length: cols }, () => new Float64Array(n));
  for (let i = 0; i < n; i++) for (let c = 0; c < cols; c++) out[c][i] = flat[i * cols + c];
  return out;
}

function plot(canvas, t, series, names, logScale) {
  const ctx = canvas.getContext("2d");
  const W = canvas.width, H = canvas.height, pad = 40;
  ctx.clearRect(0, 0, W, H);
  const tf = (v) => (logScale ? Math.log10(Math.max(v, 1e-16)) : v);
  let lo = Infinity, hi = -Infinity;
  for (const s of series) for (const v of s) { const y = tf(v); lo = Math.min(lo, y); hi = Math.max(hi, y); }
  if (logScale) lo = Math.max(lo, hi - 16);
  if (hi - lo < 1e-12) { hi += 0.5; lo -= 0.5; }
  const tmax = t[t.length - 1];
  const X = (x) => pad + (W - 2 * pad) * x / tmax;
  const Y = (y) => H - pad - (H - 2 * pad) * (Math.max(tf(y), lo) - lo) / (hi - lo);
  ctx.strokeStyle = "#999"; ctx.fillStyle = "#444"; ctx.lineWidth = 1;
  ctx.strokeRect(pad, pad, W - 2 * pad, H - 2 * pad);
  ctx.fillText("0", pad - 4, H - pad + 14);
  ctx.fillText(tmax.toFixed(1), W - pad - 10, H - pad + 14);
  ctx.fillText(logScale ? `1e${hi.toFixed(0)}` : hi.toPrecision(3), 2, pad + 4);
  ctx.fillText(logScale ? `1e${lo.toFixed(0)}` : lo.toPrecision(3), 2, H - pad);
  series.forEach((s, k) => {
    ctx.strokeStyle = COLORS[k % COLORS.length]; ctx.lineWidth = 1.6;
    ctx.beginPath();
    for (let i = 0; i < s.length; i++) (i ? ctx.lineTo : ctx.moveTo).call(ctx, X(t[i]), Y(s[i]));
    ctx.stroke();
  });
  return names.map((n, k) => `<span style="color:${COLORS[k]}">&#9632; ${n}</span>`).join("");
}

function guarded(errId, f) {
  return () => {
    try { f(); $(errId).textContent = ""; }
    catch (e) { $(errId).textContent = String(e.message ?? e); }
  };
}

const drawCurves = guarded("curves-err", () => {
  const [t, k0, k1, dk0, dk1] = columns(propagator_curves(+$("lam").value, +$("lam-t").value, 400), 5);
  $("curves-legend").innerHTML = plot($("curves"), t, [k0, k1, dk0, dk1], ["K0", "K1", "dK0/dt", "dK1/dt"], false);
});

const drawDecay = guarded("decay-err", () => {
  const flat = decay_series($("grp").value, +$("grp-b").value, +$("grp-seed").value, 30, 301);
  const [t, ...norms] = columns(flat, 5);
  $("decay-legend").innerHTML = plot($("decay"), t, norms,
    ["||u||", "||(-L)^1/2 u||", "||u_t||", "||(-L)^1/2 u_t||"], $("grp-log").checked);
});

const drawTorus = guarded("torus-err", () => {
  const res = 90, t = +$("tor-t").value;
  $("tor-t-val").textContent = t.toFixed(2);
  const v = torus_snapshot(+$("tor-b").value, +$("tor-seed").value, t, res);
  // fixed color scale from the data at t = 0 so relaxation is visible
  const v0 = torus_snapshot(+$("tor-b").value, +$("tor-seed").value, 0, res);
  const m = v0.reduce((a, x) => Math.max(a, Math.abs(x)), 1e-12);
  const c = $("torus"), ctx = c.getContext("2d");
  const img = ctx.createImageData(res, res);
  for (let i = 0; i < v.length; i++) {
    const s = Math.max(-1, Math.min(1, v[i] / m));
    img.data[4 * i] = 255 * Math.min(1, 1 + s);
    img.data[4 * i + 1] = 255 * (1 - Math.abs(s));
    img.data[4 * i + 2] = 255 * Math.min(1, 1 - s);
    img.data[4 * i + 3] = 255;
  }
  const tmp = new OffscreenCanvas(res, res);
  tmp.getContext("2d").putImageData(img, 0, 0);
  ctx.imageSmoothingEnabled = false;
  ctx.drawImage(tmp, 0, 0, c.width, c.height);
});

await init();
$("version").textContent = `(core ${version()})`;
for (const id of ["lam", "lam-t"]) $(id).addEventListener("input", drawCurves);
for (const id of ["grp", "grp-b", "grp-seed", "grp-log"]) $(id).addEventListener("input", drawDecay);
for (const id of ["tor-b", "tor-seed", "tor-t"]) $(id).addEventListener("input", drawTorus);
drawCurves(); drawDecay(); drawTorus();
