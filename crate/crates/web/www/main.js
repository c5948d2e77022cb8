import init, { lcs_ranks, luck_ratios, low_index } from "./pkg/nilgenus_web.js";

const presets = {
  f2: "gens: x y\n",
  surface2: "gens: a1 b1 a2 b2\nrel: a1^-1 b1^-1 a1 b1 a2^-1 b2^-1 a2 b2\n",
  linkA2: "gens: u v z l\nrel: u^-1 l^-1 u l\nrel: u z u^-1 z^-1 v^-1 z^-1 v\nrel: l^-1 v^-1 u z u^-1 v z\n",
  higman: "gens: a b c d\nrel: b a b^-1 a^-2\nrel: c b c^-1 b^-2\nrel: d c d^-1 c^-2\nrel: a d a^-1 d^-2\n",
  torus: "gens: a b\nrel: a^-1 b^-1 a b\n",
};

const $ = (id) => document.getElementById(id);

function show(id, f) {
  const out = $(id);
  out.className = "";
  try {
    return f();
  } catch (e) {
    out.className = "err";
    out.textContent = e.message ?? String(e);
    return null;
  }
}

// bars[i] = { label, value, text? }
function plot(canvas, bars) {
  const g = canvas.getContext("2d");
  const w = canvas.width, h = canvas.height, pad = 24;
  g.clearRect(0, 0, w, h);
  if (!bars.length) return;
  const top = Math.max(...bars.map((b) => b.value)) || 1;
  const bw = (w - 2 * pad) / bars.length;
  const y = (v) => h - pad - (v / top) * (h - 2 * pad);
  g.font = "11px sans-serif";
  g.textAlign = "center";
  bars.forEach((b, i) => {
    g.fillStyle = "#4a78b5";
    g.fillRect(pad + i * bw + 4, y(b.value), bw - 8, h - pad - y(b.value));
    g.fillStyle = "#222";
    g.fillText(b.label, pad + (i + 0.5) * bw, h - 8);
    g.fillText(b.text ?? String(b.value), pad + (i + 0.5) * bw, y(b.value) - 4);
  });
}

await init();

$("preset").onchange = () => ($("pres").value = presets[$("preset").value]);
$("pres").value = presets.f2;

$("run-lcs").onclick = () =>
  show("lcs-out", () => {
    const r = JSON.parse(lcs_ranks($("pres").value, Number($("class").value)));
    $("lcs-out").textContent =
      r.factors.map((f, i) => `G_${i + 1}/G_${i + 2}  ${f}`).join("\n") + `\nHirsch length ${r.hirsch_length}`;
    plot($("lcs-plot"), r.ranks.map((v, i) => ({ label: `c=${i + 1}`, value: v })));
  });

$("run-l2").onclick = () =>
  show("l2-out", () => {
    const r = JSON.parse(luck_ratios($("pres").value, $("tower").value, Number($("depth").value)));
    $("l2-out").textContent = r.steps
      .map((s) => `${s.label.padEnd(8)} index ${String(s.index).padStart(5)}  b1 ${String(s.b1).padStart(5)}  ${s.ratio}`)
      .join("\n");
    plot($("l2-plot"), r.steps.map((s) => ({ label: `[G:N]=${s.index}`, value: s.num / s.den, text: s.ratio })));
  });

$("run-li").onclick = () =>
  show("li-out", () => {
    const r = JSON.parse(low_index($("pres").value, Number($("max").value), $("normal").checked));
    const counts = r.by_index.map((n, i) => (i && n ? `index ${i}: ${n}` : null)).filter(Boolean);
    $("li-out").textContent =
      counts.join("\n") +
      "\n\n" +
      r.subgroups.map((s) => `${s.index}${s.normal ? " normal" : ""}  <${s.generators.join(", ")}>`).join("\n");
  });
