//! Acceptance suite: one line per criterion, non-zero exit on any failure.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use listlogic::benchlab::{
    domino_theory, explist_term, oracle_lang, oracle_tiling, random, regex_ineq_formula, tiling_model, Flavor,
};
use listlogic::language::{size, Formula, Numeral, Term};
use listlogic::sat::{dpll, ground_to_prop, sat_check};
use listlogic::unfold::unfold_term;
use listlogic::value::{conc, cons, head, mem, tail};
use listlogic::{check, eval_term, EvalConfig, Evaluator, Structure, Value};

type Outcome = Result<String, String>;

/// Name, time limit in seconds, and the check itself.
type Criterion = (&'static str, Option<u64>, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// A structurally equal copy sharing no allocation with `v`.
fn rebuild(v: &Value) -> Value {
    v.to_string().parse().expect("printed values parse")
}

fn laws() -> Outcome {
    let mut r = random::rng(1);
    let n = 1000;
    let list = |r: &mut random::Rand| random::list_value(r, 3, 4);
    let any = |r: &mut random::Rand| random::value(r, 3, 4);
    let nil = Value::nil();
    for i in 0..n {
        let x = any(&mut r);
        ensure(!mem(&x, &nil).unwrap(), || format!("{x} in nil"))?;

        let (l1, x) = (list(&mut r), any(&mut r));
        let (l2, y) = if i % 2 == 0 {
            (rebuild(&l1), rebuild(&x))
        } else {
            (list(&mut r), any(&mut r))
        };
        let same = cons(&l1, &x).unwrap() == cons(&l2, &y).unwrap();
        ensure(!same || (l1 == l2 && x == y), || {
            format!("cons not injective on {l1}, {x}")
        })?;

        let (l, x) = (list(&mut r), any(&mut r));
        let c = cons(&l, &x).unwrap();
        ensure(tail(&c).unwrap() == l && head(&c).unwrap() == x, || {
            format!("tail/head of cons({l}, {x})")
        })?;

        let _ = any(&mut r);
        ensure(tail(&nil).unwrap() == nil && head(&nil).unwrap() == nil, || {
            "tail/head of nil".into()
        })?;

        let l = list(&mut r);
        ensure(conc(&nil, &l).unwrap() == l && conc(&l, &nil).unwrap() == l, || {
            format!("nil not neutral for {l}")
        })?;

        let (a, b, z) = (list(&mut r), list(&mut r), any(&mut r));
        ensure(
            cons(&conc(&a, &b).unwrap(), &z).unwrap() == conc(&a, &cons(&b, &z).unwrap()).unwrap(),
            || format!("cons/conc on {a}, {b}, {z}"),
        )?;

        let (a, b, c) = (list(&mut r), list(&mut r), list(&mut r));
        ensure(
            conc(&conc(&a, &b).unwrap(), &c).unwrap() == conc(&a, &conc(&b, &c).unwrap()).unwrap(),
            || format!("conc not associative on {a}, {b}, {c}"),
        )?;
    }
    Ok(format!("7 laws x {n} instances"))
}

fn unfolding() -> Outcome {
    let mut r = random::rng(2);
    let s = Structure::empty();
    let mut checked = 0;
    for i in 0..200 {
        let (numeral, max) = if i % 2 == 0 {
            (Numeral::Unary, 6)
        } else {
            (Numeral::Binary, 8)
        };
        let (t, env) = random::flat_iter(&mut r, numeral, max);
        let rep = unfold_term(&t).map_err(|e| format!("{t}: {e}"))?;
        let a = eval_term(&t, &env, &s).map_err(|e| format!("{t}: {e}"))?;
        let b = eval_term(&rep.output, &env, &s).map_err(|e| format!("{}: {e}", rep.output))?;
        ensure(a == b, || format!("unfolding changed the value of {t}"))?;
        let Term::Iter { count, base, step, .. } = &t else {
            unreachable!()
        };
        let bound = (size(base) as u128) * (size(step) as u128).pow(*count as u32);
        ensure(rep.output_size as u128 <= bound, || {
            format!("{t}: unfolded size {} above {bound}", rep.output_size)
        })?;
        ensure(listlogic::language::rank(&rep.output) == 0, || {
            format!("{t}: rank not 0")
        })?;
        checked += 1;
    }
    for _ in 0..200 {
        let (t, env) = random::explicit_flat_rec(&mut r, 6);
        ensure(listlogic::language::rank(&t) <= 2, || format!("{t}: rank above 2"))?;
        let rep = unfold_term(&t).map_err(|e| format!("{t}: {e}"))?;
        let a = eval_term(&t, &env, &s).map_err(|e| format!("{t}: {e}"))?;
        let b = eval_term(&rep.output, &env, &s).map_err(|e| format!("{}: {e}", rep.output))?;
        ensure(a == b, || format!("unfolding changed the value of {t}"))?;
        checked += 1;
    }
    Ok(format!(
        "{checked} terms equal after unfolding, iteration size bound held"
    ))
}

/// Largest absolute residual of the least-squares line through the points.
fn linear_fit_residual(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let (sx, sy) = points.iter().fold((0.0, 0.0), |(a, b), (x, y)| (a + x, b + y));
    let (mx, my) = (sx / n, sy / n);
    let sxx: f64 = points.iter().map(|(x, _)| (x - mx) * (x - mx)).sum();
    let sxy: f64 = points.iter().map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = if sxx == 0.0 { 0.0 } else { sxy / sxx };
    let icpt = my - slope * mx;
    points
        .iter()
        .map(|(x, y)| (y - (icpt + slope * x)).abs())
        .fold(0.0, f64::max)
}

fn succinctness() -> Outcome {
    let s = Structure::empty();
    let mut evaluated = 0;
    for flavor in Flavor::ALL {
        for k in 1..=2u32 {
            if !flavor.supports(k) {
                continue;
            }
            let mut points = Vec::new();
            for n in 0..=4u64 {
                let Some(expected) = common::tower(k, n).filter(|&m| m <= 65536) else {
                    continue;
                };
                let t = explist_term(k, n, flavor).map_err(|e| e.to_string())?;
                let v = eval_term(&t, &listlogic::Env::new(), &s).map_err(|e| format!("{t}: {e}"))?;
                let common::Tree::Seq(elems) = common::to_tree(&v) else {
                    return Err(format!("{flavor} k={k} n={n}: not a list"));
                };
                ensure(elems.len() as u64 == expected, || {
                    format!("{flavor} k={k} n={n}: {} elements, expected {expected}", elems.len())
                })?;
                ensure(elems.iter().all(|e| *e == common::Tree::Seq(Vec::new())), || {
                    format!("{flavor} k={k} n={n}: element other than nil")
                })?;
                points.push((n as f64, size(&t) as f64));
                evaluated += 1;
            }
            let res = linear_fit_residual(&points);
            ensure(res == 0.0, || {
                format!("{flavor} k={k}: sizes {points:?} not linear (residual {res})")
            })?;
        }
    }
    Ok(format!("{evaluated} terms exact, sizes linear in n"))
}

fn regex_agreement() -> Outcome {
    let mut r = random::rng(4);
    let s = Structure::empty();
    let mut equal = 0;
    for _ in 0..100 {
        let (e1, e2) = random::regex_pair(&mut r, &["a", "b"], 3, 4);
        let f = regex_ineq_formula(&e1, &e2).map_err(|e| e.to_string())?;
        let verdict = check(&f, &s).map_err(|e| format!("{e1} vs {e2}: {e}"))?.verdict;
        let l1 = oracle_lang(&e1).map_err(|e| e.to_string())?;
        let l2 = oracle_lang(&e2).map_err(|e| e.to_string())?;
        let joined = |l: &std::collections::BTreeSet<Vec<String>>| {
            let mut v: Vec<String> = l.iter().map(|w| w.join(" ")).collect();
            v.sort();
            v
        };
        ensure(
            joined(&l1) == common::words(&e1) && joined(&l2) == common::words(&e2),
            || format!("language oracles disagree on {e1} or {e2}"),
        )?;
        let differ = l1 != l2;
        ensure(verdict == differ, || {
            format!("{e1} vs {e2}: formula says {verdict}, languages differ: {differ}")
        })?;
        equal += usize::from(!differ);
    }
    Ok(format!("100/100 agree ({equal} equal-language pairs)"))
}

fn domino_agreement() -> Outcome {
    let mut r = random::rng(5);
    let mut sat = 0;
    for i in 0..50 {
        let d = random::domino_system(&mut r, 3, 2);
        let m = 2 + i % 3;
        let eps = Value::nils(m);
        let side = Term::from_value(&eps);
        let axioms = domino_theory(&d, &side).map_err(|e| e.to_string())?;
        let theory = Formula::conjunction(axioms.clone());
        let report = sat_check(&theory).map_err(|e| format!("{}: {e}", d.to_json()))?;
        let tiling = oracle_tiling(&d, m).map_err(|e| e.to_string())?;
        let dp = common::tiling_exists(&d, m);
        ensure(tiling.is_some() == dp, || {
            format!("{} m={m}: tiling oracles disagree", d.to_json())
        })?;
        ensure(report.is_sat() == dp, || {
            format!("{} m={m}: sat={} tiling={dp}", d.to_json(), report.is_sat())
        })?;
        if let Some(w) = report.witness() {
            sat += 1;
            for ax in &axioms {
                ensure(check(ax, w).map_err(|e| e.to_string())?.verdict, || {
                    format!("{} m={m}: witness violates {ax}", d.to_json())
                })?;
            }
        }
        if let Some(t) = tiling {
            let model = tiling_model(&d, &eps, &t).map_err(|e| e.to_string())?;
            for ax in &axioms {
                ensure(check(ax, &model).map_err(|e| e.to_string())?.verdict, || {
                    format!("{} m={m}: tiling model violates {ax}", d.to_json())
                })?;
            }
        }
    }
    Ok(format!("50/50 agree ({sat} tileable), all models check"))
}

fn sat_oracle() -> Outcome {
    let mut r = random::rng(6);
    let pool = random::ground_pool();
    let mut sat = 0;
    for _ in 0..200 {
        let f = random::ground_formula(&mut r, 4);
        let g = ground_to_prop(&f).map_err(|e| format!("{f}: {e}"))?;
        ensure(g.atoms.len() <= 12, || format!("{f}: {} atoms", g.atoms.len()))?;
        let verdict = dpll(&g.formula, g.atoms.len()).is_some();
        let brute = common::brute_force_sat(&g.formula, g.atoms.len());
        ensure(verdict == brute, || format!("{f}: dpll {verdict}, enumeration {brute}"))?;
        let semantic = common::satisfiable_over_pool(&f, &pool);
        ensure(verdict == semantic, || {
            format!("{f}: dpll {verdict}, structures {semantic}")
        })?;
        let report = sat_check(&f).map_err(|e| e.to_string())?;
        ensure(report.is_sat() == verdict, || format!("{f}: sat_check disagrees"))?;
        if let Some(w) = report.witness() {
            sat += 1;
            ensure(check(&f, w).map_err(|e| e.to_string())?.verdict, || {
                format!("{f}: bad witness")
            })?;
        }
    }
    Ok(format!("200/200 agree ({sat} satisfiable)"))
}

fn accounting() -> Outcome {
    let mut r = random::rng(7);
    let configs = [
        EvalConfig::default(),
        EvalConfig::sequential(),
        EvalConfig {
            par_threshold: 2,
            ..EvalConfig::default()
        },
        EvalConfig {
            cache_ground_terms: false,
            ..EvalConfig::sequential()
        },
    ];
    let mut total = 0u64;
    for _ in 0..300 {
        let (f, s) = random::prefixed_formula(&mut r, 3, 20);
        let expected = common::prefix_product(&f);
        let mut verdicts = Vec::new();
        for cfg in configs {
            let rep = Evaluator::new(&s)
                .with_config(cfg)
                .check(&f)
                .map_err(|e| format!("{f}: {e}"))?;
            ensure(rep.counters.substitutions == expected, || {
                format!(
                    "{f}: {} instances counted, product {expected}",
                    rep.counters.substitutions
                )
            })?;
            verdicts.push(rep.verdict);
        }
        ensure(verdicts.windows(2).all(|w| w[0] == w[1]), || {
            format!("{f}: configurations disagree")
        })?;
        total += expected;
    }
    Ok(format!(
        "300 formulas x 4 configurations exact ({total} instances each)"
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 7] = [
        ("equational laws", Some(5), laws),
        ("unfolding preserves values", None, unfolding),
        ("succinct list terms", Some(30), succinctness),
        ("expression inequality vs languages", Some(60), regex_agreement),
        ("domino theory vs tilings", Some(120), domino_agreement),
        ("DPLL vs exhaustive enumeration", None, sat_oracle),
        ("quantifier accounting", None, accounting),
    ];
    let mut failed = 0;
    for (i, (name, limit, run)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            Err(format!(
                "panicked: {:?}",
                p.downcast_ref::<String>()
                    .cloned()
                    .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
            ))
        });
        let elapsed = start.elapsed();
        let outcome = match (outcome, limit) {
            (Ok(msg), Some(l)) if elapsed > Duration::from_secs(l) => {
                Err(format!("{msg}, but took {:.2}s", elapsed.as_secs_f64()))
            }
            (o, _) => o,
        };
        let limit = limit.map(|l| format!(" (limit {l}s)")).unwrap_or_default();
        match outcome {
            Ok(msg) => println!("PASS [{}] {name}: {msg} in {:.2}s{limit}", i + 1, elapsed.as_secs_f64()),
            Err(msg) => {
                failed += 1;
                println!("FAIL [{}] {name}: {msg} in {:.2}s{limit}", i + 1, elapsed.as_secs_f64());
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
