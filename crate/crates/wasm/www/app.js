import init, { phiEntropySurface, innerInf, maxcorrPq } from "./pkg/ucsb_wasm.js";

const $ = (id) => document.getElementById(id);

function show(el, fn) {
  el.classList.remove("err");
  try {
    el.textContent = JSON.stringify(JSON.parse(fn()), null, 2);
  } catch (e) {
    el.classList.add("err");
    el.textContent = String(e);
  }
}

function drawSurface() {
  const rho = Number($("rho").value);
  $("rho-value").textContent = rho.toFixed(2);
  const canvas = $("surface");
  const n = canvas.width;
  const values = phiEntropySurface(rho, n);
  const ctx = canvas.getContext("2d");
  const img = ctx.createImageData(n, n);
  for (let k = 0; k < values.length; k++) {
    const v = values[k];
    img.data[4 * k] = Math.round(255 * v);
    img.data[4 * k + 1] = Math.round(255 * v * v);
    img.data[4 * k + 2] = Math.round(255 * (1 - v));
    img.data[4 * k + 3] = 255;
  }
  ctx.putImageData(img, 0, 0);
}

await init();

$("rho").addEventListener("input", drawSurface);
drawSurface();

$("run-inf").addEventListener("click", () => {
  const out = $("inf-out");
  out.textContent = "computing...";
  setTimeout(() =>
    show(out, () => innerInf(Number($("t").value), Number($("alpha").value), Number($("grid").value))), 0);
});

$("run-mc").addEventListener("click", () =>
  show($("mc-out"), () => maxcorrPq(Number($("p").value), Number($("q").value), Number($("r").value))));
