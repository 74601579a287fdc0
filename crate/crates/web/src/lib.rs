//! Browser playground: interpret, optimize and verify from a static page.
//!
//! Every export takes and returns plain strings. The result is a JSON
//! object `{"ok": bool, "text": string}` so the page never has to catch
//! exceptions.

use mdfy::analysis::{is_pure, LocalsSet};
use mdfy::gen::Mutant;
use mdfy::passes::eliminate_mul_zero;
use mdfy::verify::{self, InstanceName, VerifyOptions};
use mdfy::{interp_stmt, parse, pretty_print, Context};
use serde_json::json;
use wasm_bindgen::prelude::*;

/// Statement budget for in-browser verification; the page runs on one thread.
pub const PLAYGROUND_BUDGET: usize = 20_000;

fn reply(result: Result<String, String>) -> String {
    let (ok, text) = match result {
        Ok(text) => (true, text),
        Err(text) => (false, text),
    };
    json!({ "ok": ok, "text": text }).to_string()
}

pub fn run_program(source: &str, ctx: &str) -> Result<String, String> {
    let program = parse(source).map_err(|e| e.to_string())?;
    let ctx = if ctx.trim().is_empty() {
        Context::new()
    } else {
        Context::from_json(ctx).map_err(|e| format!("context: {e}"))?
    };
    interp_stmt(&program, &ctx)
        .map(|out| format!("Success value={} ctx={}", out.value, out.ctx))
        .map_err(|e| format!("Failure {e}"))
}

/// The optimized program, plus whether the original is pure with no locals.
pub fn optimize_program(source: &str) -> Result<String, String> {
    let program = parse(source).map_err(|e| e.to_string())?;
    let pure = is_pure(&program, &LocalsSet::new());
    Ok(format!(
        "{}\n// pure: {pure}",
        pretty_print(&eliminate_mul_zero(&program))
    ))
}

pub fn verify_instance(instance: &str, depth: u32, mutant: &str) -> Result<String, String> {
    let instance: InstanceName = instance
        .parse()
        .map_err(|e: mdfy::verify::UnknownInstance| e.to_string())?;
    let mutant = match mutant.trim() {
        "" | "none" => None,
        name => Some(name.parse::<Mutant>().map_err(|e| e.to_string())?),
    };
    let mut opts = VerifyOptions::new(instance);
    opts.depth = Some(depth as usize);
    opts.mutant = mutant;
    opts.budget = Some(PLAYGROUND_BUDGET);
    let report = verify::run(&opts);
    let text = report.to_text();
    if report.ok {
        Ok(text)
    } else {
        Err(text)
    }
}

#[wasm_bindgen]
pub fn run(source: &str, ctx: &str) -> String {
    reply(run_program(source, ctx))
}

#[wasm_bindgen]
pub fn optimize(source: &str) -> String {
    reply(optimize_program(source))
}

#[wasm_bindgen]
pub fn verify(instance: &str, depth: u32, mutant: &str) -> String {
    reply(verify_instance(instance, depth, mutant))
}
