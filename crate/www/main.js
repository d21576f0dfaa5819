import init, {
  solve_three,
  stability_of_solution,
  template_names,
  EvolveSession,
} from "./pkg/diskfoam_wasm.js";

const $ = (id) => document.getElementById(id);

function weights() {
  return [Number($("w1").value), Number($("w2").value), Number($("w3").value)];
}

function renderSolve() {
  const [w1, w2, w3] = weights();
  $("w1v").textContent = w1.toFixed(2);
  $("w2v").textContent = w2.toFixed(2);
  $("w3v").textContent = w3.toFixed(2);
  try {
    const out = JSON.parse(solve_three(w1, w2, w3));
    $("solveFigure").innerHTML = out.svg;
    $("solveStats").textContent =
      `perimeter ${out.perimeter.toFixed(9)}\n` +
      `areas     [${out.areas.map((a) => a.toFixed(4)).join(", ")}]\n` +
      `pressures [${out.pressures.map((p) => p.toFixed(4)).join(", ")}]\n` +
      `curvatures h12 ${out.curvatures[0].toFixed(4)}, h23 ${out.curvatures[1].toFixed(4)}, h31 ${out.curvatures[2].toFixed(4)}`;
    $("solveStats").classList.remove("error");
  } catch (e) {
    $("solveStats").textContent = String(e);
    $("solveStats").classList.add("error");
  }
  $("stabilityStats").textContent = "";
}

function renderStability() {
  const [w1, w2, w3] = weights();
  $("stabilityStats").textContent = "computing…";
  setTimeout(() => {
    try {
      const out = JSON.parse(stability_of_solution(w1, w2, w3, 48));
      $("stabilityStats").textContent =
        `verdict ${out.verdict}\n` +
        `lambda  [${out.modes.map((m) => m.toExponential(3)).join(", ")}]\n` +
        `(the zero mode is the rotation Jacobi direction)`;
      $("stabilityStats").classList.remove("error");
    } catch (e) {
      $("stabilityStats").textContent = String(e);
      $("stabilityStats").classList.add("error");
    }
  }, 10);
}

let session = null;
let animating = false;

function stepLoop() {
  if (!session) return;
  try {
    const out = JSON.parse(session.step(120));
    $("evolveFigure").innerHTML = out.svg;
    let text =
      `perimeter  ${out.perimeter.toFixed(9)}\n` +
      `iterations ${out.iterations}\n` +
      `converged  ${out.converged}`;
    if (out.event) text += `\nstopped: ${out.event}`;
    $("evolveStats").textContent = text;
    if (!out.converged && !out.event && animating) {
      requestAnimationFrame(stepLoop);
    } else {
      animating = false;
    }
  } catch (e) {
    $("evolveStats").textContent = String(e);
    $("evolveStats").classList.add("error");
    animating = false;
  }
}

function startEvolve() {
  try {
    $("evolveStats").classList.remove("error");
    session = new EvolveSession($("template").value, $("evolveAreas").value, 32);
    animating = true;
    stepLoop();
  } catch (e) {
    $("evolveStats").textContent = String(e);
    $("evolveStats").classList.add("error");
  }
}

await init();

for (const n of [3, 4, 5, 6]) {
  for (const name of JSON.parse(template_names(n))) {
    const opt = document.createElement("option");
    opt.value = name;
    opt.textContent = `${name} (${n} regions)`;
    $("template").appendChild(opt);
  }
}
$("template").value = "conf_j";

for (const id of ["w1", "w2", "w3"]) {
  $(id).addEventListener("input", renderSolve);
}
$("stabilityBtn").addEventListener("click", renderStability);
$("evolveBtn").addEventListener("click", () => {
  $("evolveAreas").value = $("evolveAreas").value.trim();
  startEvolve();
});

renderSolve();
