//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any criterion fails.

use std::collections::BTreeSet;
use std::panic::{self, AssertUnwindSafe};
use std::process::Command;
use std::time::{Duration, Instant};

use mdfy::analysis::is_effect_free;
use mdfy::gen::{enum_contexts, enum_stmts, Behavior, CorpusSpec, Mutant};
use mdfy::induction::enum_lists;
use mdfy::induction::{premise, revalidate_list, revalidate_stmt, Counterexample, Obligation, StmtInduction};
use mdfy::instances::{AppAssocInstance, IsPureInstance, MulZeroInstance, UnchangedState, UnchangedVarInstance};
use mdfy::passes::eliminate_mul_zero;
use mdfy::verify::{InstanceName, VerifyReport, LIST_ELEMS};
use mdfy::{interp_stmt, parse, pretty_print, Op, Stmt};

const INTERP_TIME_LIMIT: Duration = Duration::from_secs(120);
const LIST_TIME_LIMIT: Duration = Duration::from_secs(5);
const STANDARD_STATEMENTS: usize = 200_000;

type Verdict = Result<String, String>;
type Criterion = (&'static str, fn() -> Verdict);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

struct Verified {
    code: i32,
    stdout: String,
    elapsed: Duration,
}

fn mdfy_verify(args: &[&str], threads: Option<&str>) -> Verified {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_mdfy"));
    cmd.arg("verify").args(args);
    match threads {
        Some(n) => cmd.env("MDFY_THREADS", n),
        None => cmd.env_remove("MDFY_THREADS"),
    };
    let start = Instant::now();
    let out = cmd.output().expect("spawn mdfy");
    Verified {
        code: out.status.code().unwrap_or(-1),
        stdout: String::from_utf8(out.stdout).expect("utf-8 output"),
        elapsed: start.elapsed(),
    }
}

fn json_report(args: &[&str]) -> Result<(VerifyReport, Verified), String> {
    let mut full = args.to_vec();
    full.extend(["--format", "json"]);
    let run = mdfy_verify(&full, None);
    let report: VerifyReport = serde_json::from_str(&run.stdout).map_err(|e| format!("report does not decode: {e}"))?;
    Ok((report, run))
}

fn all_clean(report: &VerifyReport) -> Result<(), String> {
    let failing = report.failing();
    ensure(report.ok && failing.is_empty(), || {
        format!("failing obligations: {failing:?}")
    })
}

fn standard() -> (Vec<Stmt>, CorpusSpec) {
    let spec = CorpusSpec::standard();
    (enum_stmts(&spec).collect(), spec)
}

fn interpreter_invariants() -> Verdict {
    let start = Instant::now();
    let (stmts, spec) = standard();
    ensure(stmts.len() == STANDARD_STATEMENTS, || {
        format!("corpus has {} statements", stmts.len())
    })?;
    let contexts = enum_contexts(&spec.vars, &spec.ctx_values);
    let (mut key_runs, mut scope_runs) = (0u64, 0u64);
    for s in &stmts {
        for ctx in &contexts {
            if let Ok(out) = interp_stmt(s, ctx) {
                key_runs += 1;
                ensure(out.ctx.same_keys(ctx), || {
                    format!("keys changed: {s} in {ctx} gave {}", out.ctx)
                })?;
            }
            for x in ctx.keys() {
                let bound = Stmt::bind(x, Stmt::Const(0), s.clone());
                if let Ok(out) = interp_stmt(&bound, ctx) {
                    scope_runs += 1;
                    ensure(out.ctx.get(x) == ctx.get(x), || {
                        format!("{x} escaped: {bound} in {ctx}")
                    })?;
                }
            }
        }
    }
    let elapsed = start.elapsed();
    ensure(elapsed < INTERP_TIME_LIMIT, || format!("took {elapsed:?}"))?;
    Ok(format!(
        "{key_runs} successful runs keep their keys, {scope_runs} scoped runs restore the bound variable, {:.1}s",
        elapsed.as_secs_f64()
    ))
}

fn is_pure_correct() -> Verdict {
    let (report, run) = json_report(&["--instance", "is-pure", "--depth", "3"])?;
    ensure(run.code == 0, || format!("exit code {}", run.code))?;
    all_clean(&report)?;
    ensure(report.obligations.len() == Obligation::ALL.len(), || {
        "missing obligations".into()
    })?;
    for name in ["BindStep", "SeqConsStep", "AssignStep", "StepSound"] {
        let ob = report.obligation(name).ok_or_else(|| format!("{name} missing"))?;
        ensure(!ob.vacuous && ob.checked > 0, || format!("{name} is vacuous"))?;
    }
    let bind = report.obligation("BindStep").unwrap().checked;
    let seq = report.obligation("SeqConsStep").unwrap().checked;
    Ok(format!(
        "13 obligations and Induct clean (BindStep checked={bind}, SeqConsStep checked={seq})"
    ))
}

fn mul_zero_refines() -> Verdict {
    let (report, run) = json_report(&["--instance", "mul-zero", "--depth", "3"])?;
    ensure(run.code == 0, || format!("exit code {}", run.code))?;
    all_clean(&report)?;
    let (stmts, spec) = standard();
    let contexts = enum_contexts(&spec.vars, &spec.ctx_values);
    let (mut refined, mut rewritten) = (0u64, 0u64);
    for s in &stmts {
        let t = eliminate_mul_zero(s);
        if t != *s {
            rewritten += 1;
        }
        ensure(eliminate_mul_zero(&t) == t, || format!("not idempotent on {s}"))?;
        for ctx in &contexts {
            if let Ok(original) = interp_stmt(s, ctx) {
                refined += 1;
                let got = interp_stmt(&t, ctx);
                ensure(got.as_ref() == Ok(&original), || format!("{s} => {t} differs in {ctx}"))?;
            }
        }
    }
    ensure(rewritten > 0, || "the pass never fired".into())?;
    Ok(format!(
        "obligations clean; {refined} successful runs refined, {rewritten} statements rewritten, idempotent"
    ))
}

fn assigns(body: &Stmt, x: &mdfy::VarName) -> bool {
    body.any_node(&mut |n| matches!(n, Stmt::Assign(a, _) if a == x))
}

fn unchanged_var_correct() -> Verdict {
    let (report, run) = json_report(&["--instance", "unchanged-var", "--depth", "3"])?;
    ensure(run.code == 0, || format!("exit code {}", run.code))?;
    all_clean(&report)?;
    let (stmts, spec) = standard();
    let inst = UnchangedVarInstance::new(Behavior::REFERENCE);
    let contexts = enum_contexts(&spec.vars, &spec.ctx_values);
    let mut shadowing = 0u64;
    let mut example = None;
    for s in &stmts {
        let Stmt::Bind(bvar, _, body) = s else { continue };
        if !assigns(body, bvar) {
            continue;
        }
        for ctx in &contexts {
            let st = UnchangedState {
                watched: bvar.clone(),
                ctx: ctx.clone(),
            };
            if premise(&inst, Obligation::BindStep, &st, s) == Some(true) {
                shadowing += 1;
                ensure(inst.property(&st, s), || format!("shadowing case fails: {s}"))?;
                example.get_or_insert_with(|| pretty_print(s));
            }
        }
    }
    ensure(shadowing > 0, || "no non-vacuous shadowing BindStep case".into())?;
    Ok(format!(
        "obligations clean; {shadowing} non-vacuous shadowing BindStep cases, e.g. `{}`",
        example.unwrap()
    ))
}

fn list_assoc() -> Verdict {
    let (report, run) = json_report(&["--instance", "list-assoc", "--depth", "4"])?;
    ensure(run.code == 0, || format!("exit code {}", run.code))?;
    all_clean(&report)?;
    let names: Vec<&str> = report
        .obligations
        .iter()
        .chain([&report.assembled])
        .map(|r| r.name.as_str())
        .collect();
    ensure(names == ["NilCase", "ConsCase", "Induct"], || {
        format!("reports {names:?}")
    })?;
    ensure(run.elapsed < LIST_TIME_LIMIT, || format!("took {:?}", run.elapsed))?;
    Ok(format!(
        "NilCase, ConsCase, Induct clean over {} lists, {:.2}s",
        report.assembled.checked,
        run.elapsed.as_secs_f64()
    ))
}

fn revalidate_all(
    report: &VerifyReport,
    check: impl Fn(&str, &Counterexample) -> Result<(bool, bool), String>,
) -> Result<usize, String> {
    let mut n = 0;
    for ob in report.obligations.iter().chain([&report.assembled]) {
        for cx in &ob.failures {
            let (premise, conclusion) = check(&ob.name, cx)?;
            ensure(premise && !conclusion, || {
                format!(
                    "{} counterexample does not reproduce: {} at {}",
                    ob.name, cx.stmt, cx.state
                )
            })?;
            n += 1;
        }
    }
    Ok(n)
}

fn has_impure_multiplicand(s: &Stmt) -> bool {
    s.any_node(&mut |n| match n {
        Stmt::BinOp(Op::Mul, l, r) => {
            (**l == Stmt::Const(0) && !is_effect_free(r)) || (**r == Stmt::Const(0) && !is_effect_free(l))
        }
        _ => false,
    })
}

fn fault_localization() -> Verdict {
    struct Case {
        mutant: Mutant,
        instance: InstanceName,
        depth: &'static str,
        golden: &'static [&'static str],
    }
    let cases = [
        Case {
            mutant: Mutant::NoScopeReset,
            instance: InstanceName::IsPure,
            depth: "2",
            golden: &["BindStep", "Induct"],
        },
        Case {
            mutant: Mutant::DropLocalsCheck,
            instance: InstanceName::IsPure,
            depth: "2",
            golden: &["AssignStep", "Induct"],
        },
        Case {
            mutant: Mutant::RewriteImpure,
            instance: InstanceName::MulZero,
            depth: "2",
            golden: &["BinOpStep", "Induct"],
        },
        Case {
            mutant: Mutant::AppSnoc,
            instance: InstanceName::ListAssoc,
            depth: "4",
            golden: &["ConsCase", "Induct"],
        },
    ];
    let mut summary = Vec::new();
    for case in cases {
        let label = format!("{} on {}", case.mutant, case.instance);
        let (report, run) = json_report(&[
            "--instance",
            case.instance.name(),
            "--depth",
            case.depth,
            "--mutant",
            case.mutant.name(),
        ])?;
        ensure(run.code == 1 && !report.ok, || {
            format!("{label}: verification did not fail")
        })?;
        let failing: BTreeSet<&str> = report.failing().into_iter().collect();
        let golden: BTreeSet<&str> = case.golden.iter().copied().collect();
        ensure(failing == golden, || {
            format!("{label}: failing {failing:?}, expected {golden:?}")
        })?;
        for leaf in ["ConstCase", "VarCase", "SeqNil"] {
            ensure(!failing.contains(leaf), || format!("{label}: leaf {leaf} failed"))?;
        }
        let behavior = Behavior::with_mutant(Some(case.mutant));
        let err = |e: mdfy::induction::RevalidateError| e.to_string();
        let replayed = match case.instance {
            InstanceName::IsPure => revalidate_all(&report, |ob, cx| {
                revalidate_stmt(&IsPureInstance::new(behavior), ob, cx).map_err(err)
            })?,
            InstanceName::MulZero => {
                let impure = report
                    .obligation("BinOpStep")
                    .into_iter()
                    .chain([&report.assembled])
                    .flat_map(|r| &r.failures)
                    .any(|cx| parse(&cx.stmt).is_ok_and(|s| has_impure_multiplicand(&s)));
                ensure(impure, || {
                    format!("{label}: no counterexample with an impure multiplicand")
                })?;
                revalidate_all(&report, |ob, cx| {
                    revalidate_stmt(&MulZeroInstance::new(behavior), ob, cx).map_err(err)
                })?
            }
            InstanceName::ListAssoc => {
                let inst = AppAssocInstance::new(enum_lists(&LIST_ELEMS, 4), behavior);
                revalidate_all(&report, |ob, cx| revalidate_list(&inst, ob, cx).map_err(err))?
            }
            InstanceName::UnchangedVar => unreachable!(),
        };
        ensure(replayed > 0, || format!("{label}: no counterexamples to replay"))?;
        summary.push(format!(
            "{} -> {} ({replayed} replayed)",
            case.mutant,
            case.golden.join("+")
        ));
    }
    Ok(summary.join("; "))
}

fn round_trip() -> Verdict {
    let (stmts, _) = standard();
    for s in &stmts {
        let text = pretty_print(s);
        let back = parse(&text).map_err(|e| format!("`{text}` does not parse: {e}"))?;
        ensure(back == *s, || format!("`{text}` parses to a different tree"))?;
    }
    Ok(format!("{} statements round trip", stmts.len()))
}

fn determinism() -> Verdict {
    let args = ["--instance", "is-pure", "--depth", "2", "--format", "json"];
    let mut outputs = Vec::new();
    for threads in ["1", "1", "8", "8"] {
        let run = mdfy_verify(&args, Some(threads));
        ensure(run.code == 0, || {
            format!("exit code {} with {threads} threads", run.code)
        })?;
        outputs.push(run.stdout);
    }
    ensure(outputs.windows(2).all(|w| w[0] == w[1]), || "outputs differ".into())?;
    Ok(format!(
        "4 runs (1, 1, 8, 8 threads) byte-identical, {} bytes",
        outputs[0].len()
    ))
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("interpreter invariants", interpreter_invariants),
        ("is-pure obligations", is_pure_correct),
        ("mul-zero refinement", mul_zero_refines),
        ("unchanged-var obligations", unchanged_var_correct),
        ("list associativity", list_assoc),
        ("fault localization", fault_localization),
        ("syntax round trip", round_trip),
        ("deterministic reports", determinism),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let verdict = panic::catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        match verdict {
            Ok(detail) => println!("PASS {} {name}: {detail}", i + 1),
            Err(reason) => {
                failed += 1;
                println!("FAIL {} {name}: {reason}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
