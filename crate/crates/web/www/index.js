import init, { run, optimize, verify } from "./pkg/mdfy_web.js";

const $ = (id) => document.getElementById(id);

function show(target, reply) {
  const { ok, text } = JSON.parse(reply);
  target.textContent = text;
  target.classList.toggle("bad", !ok);
}

await init();

$("run").onclick = () => show($("program-out"), run($("source").value, $("ctx").value));
$("optimize").onclick = () => show($("program-out"), optimize($("source").value));
$("verify").onclick = () => {
  $("verify-out").textContent = "checking...";
  $("verify-out").classList.remove("bad");
  setTimeout(() => {
    show($("verify-out"), verify($("instance").value, Number($("depth").value), $("mutant").value));
  });
};
