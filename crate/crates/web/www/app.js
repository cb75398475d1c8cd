import init, { torsion, lifted_dilog, lift_path } from "./pkg/ccs_web.js";

const $ = (id) => document.getElementById(id);
const num = (id) => Number($(id).value);

function show(out, f) {
  out.classList.remove("err");
  try {
    out.textContent = JSON.stringify(JSON.parse(f()), null, 2);
  } catch (e) {
    out.classList.add("err");
    out.textContent = String(e.message ?? e);
  }
}

await init();
$("status").textContent = "Ready.";

$("t-run").onclick = () =>
  show($("t-out"), () => torsion(num("t-n"), num("t-seed"), num("t-trials")));
$("l-run").onclick = () =>
  show($("l-out"), () => lifted_dilog(num("l-re"), num("l-im"), num("l-p"), num("l-q")));
$("w-run").onclick = () =>
  show($("w-out"), () => lift_path(num("w-p0"), num("w-q0"), num("w-r"), num("w-p1"), num("w-q1")));
