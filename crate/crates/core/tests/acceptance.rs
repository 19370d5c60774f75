//! One PASS/FAIL line per acceptance criterion. Exits nonzero if any fails.

use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use kanquillen::harness::corpus::{named, standard_corpus};
use kanquillen::harness::{run_all, run_scenario, Caps, Config, Profile, ScenarioId, ScenarioReport, Verdict};
use kanquillen::homotopy::{collapse_search, homology, ChainComplex, CollapseOutcome};
use kanquillen::sset::colimit::sphere;
use kanquillen::subdivision::{sd_iter, ExComplex};
use kanquillen::SimplicialSet;

type Criterion<'a> = (&'a str, Box<dyn Fn() -> Outcome>);

struct Outcome {
    ok: bool,
    detail: String,
}

fn scenario_summary(r: &ScenarioReport) -> String {
    let mut s = format!("{} {} expectations, verdict {}", r.id, r.expectations.len(), r.verdict);
    if let Some(reason) = &r.skip_reason {
        s.push_str(&format!(", skipped: {reason}"));
    }
    for e in r.failed_expectations().take(3) {
        s.push_str(&format!(", mismatch {}: expected {} observed {}", e.check, e.expected, e.observed));
    }
    s
}

fn expectation_value(r: &ScenarioReport, check: &str) -> Option<serde_json::Value> {
    r.expectations.iter().find(|e| e.check == check && e.matched).map(|e| e.observed.clone())
}

fn scenario(id: ScenarioId, caps: &Caps, budget: Duration, extra: impl Fn(&ScenarioReport) -> Result<(), String>) -> Outcome {
    let start = Instant::now();
    let r = run_scenario(id, caps);
    let elapsed = start.elapsed();
    let mut detail = format!("{} in {:.1}s", scenario_summary(&r), elapsed.as_secs_f64());
    let mut ok = r.verdict == Verdict::Pass && elapsed < budget;
    if elapsed >= budget {
        detail.push_str(&format!(", over the {}s budget", budget.as_secs()));
    }
    if let Err(e) = extra(&r) {
        ok = false;
        detail.push_str(&format!(", {e}"));
    }
    Outcome { ok, detail }
}

fn adjunction(caps: &Caps) -> Outcome {
    scenario(ScenarioId::S1, caps, Duration::from_secs(60), |r| {
        let pairs = r.expectations.iter().filter(|e| e.check.ends_with("|maps(sd K, L)| = |maps(K, Ex L)|")).count();
        if pairs != 12 {
            return Err(format!("{pairs} pairs checked instead of 12"));
        }
        match expectation_value(r, "(Δ^1, Δ^1): cardinality") {
            Some(v) if v == 5 => Ok(()),
            other => Err(format!("(Δ^1, Δ^1) cardinality {other:?}")),
        }
    })
}

fn last_vertex(caps: &Caps) -> Outcome {
    scenario(ScenarioId::S2, caps, Duration::from_secs(120), |r| {
        let expected = standard_corpus(3).len() * 2;
        let n = r.expectations.iter().filter(|e| e.check.starts_with("last vertex")).count();
        if n != expected {
            return Err(format!("{n} last-vertex checks instead of {expected}"));
        }
        Ok(())
    })
}

fn closed_form(caps: &Caps) -> Outcome {
    scenario(ScenarioId::S5, caps, Duration::from_secs(120), |r| {
        let n = r.expectations.iter().filter(|e| e.check.contains("up to (4,4)") && e.check.starts_with("diag_!")).count();
        if n != 9 {
            return Err(format!("{n} horns compared through (4,4) instead of 9"));
        }
        match expectation_value(r, "diag_!(Λ^2_1) at bidegree (0,0)") {
            Some(v) if v == 7 => Ok(()),
            other => Err(format!("bidegree (0,0) count {other:?}")),
        }
    })
}

fn counit(caps: &Caps) -> Outcome {
    scenario(ScenarioId::S6, caps, Duration::from_secs(300), |r| {
        let levels = r.expectations.iter().filter(|e| e.check.starts_with("counit")).count();
        // Δ^0..Δ^3 and the 9 horns, levels 0..=3
        if levels != 13 * 4 {
            return Err(format!("{levels} levelwise checks instead of {}", 13 * 4));
        }
        Ok(())
    })
}

fn small_object(caps: &Caps) -> Outcome {
    scenario(ScenarioId::S7, caps, Duration::from_secs(300), |r| {
        let certified = r.expectations.iter().filter(|e| e.check.contains("right lifting property") && e.matched).count();
        if certified != 2 {
            return Err(format!("{certified} of 2 second factors certified"));
        }
        Ok(())
    })
}

fn ex_extension(caps: &Caps) -> Outcome {
    scenario(ScenarioId::S3, caps, Duration::from_secs(600), |r| {
        for y in ["Δ^1", "∂Δ^2"] {
            for i in 0..=2 {
                let check = format!("every Λ^2_{i} -> Ex({y}) extends to Δ^2 -> Ex²({y})");
                if expectation_value(r, &check).is_none() {
                    return Err(format!("missing or failed: {check}"));
                }
            }
        }
        Ok(())
    })
}

fn oracle_corpus() -> Vec<(String, SimplicialSet)> {
    let mut out: Vec<(String, SimplicialSet)> =
        standard_corpus(3).into_iter().map(|n| (n.clone(), named(&n).unwrap())).collect();
    for n in 1..=4 {
        out.push((format!("sphere:{n}"), sphere(n)));
    }
    out.push(("sd²∂Δ^3".into(), sd_iter(&Arc::new(named("boundary:3").unwrap()), 2).unwrap().0));
    out.push(("Ex(∂Δ^2)".into(), ExComplex::new(&Arc::new(named("boundary:2").unwrap()), 2).unwrap().object().as_ref().clone()));
    out
}

fn oracles() -> Outcome {
    let start = Instant::now();
    let mut problems = Vec::new();
    let corpus = oracle_corpus();
    for (name, k) in &corpus {
        if let Err(e) = ChainComplex::normalized(k).check_dd_zero() {
            problems.push(format!("{name}: ∂∂ ≠ 0 ({e})"));
        }
        let h = homology(k).unwrap();
        let cells: i64 = k.counts().iter().enumerate().map(|(d, &c)| if d % 2 == 0 { c as i64 } else { -(c as i64) }).sum();
        if cells != h.euler_characteristic() {
            problems.push(format!("{name}: cell Euler characteristic {cells}, Betti {}", h.euler_characteristic()));
        }
        if let CollapseOutcome::Collapsed(c) = collapse_search(k, 200_000) {
            if c.replay(k).is_err() || !h.reduced().is_zero() {
                problems.push(format!("{name}: collapsible but not acyclic"));
            }
        }
    }
    for n in 1..=4 {
        let h = homology(&sphere(n)).unwrap().reduced();
        for d in 0..=n {
            let g = h.get(d);
            let want = usize::from(d == n);
            if g.betti != want || !g.torsion.is_empty() {
                problems.push(format!("Δ^{n}/∂Δ^{n}: reduced H_{d} has rank {} and torsion {:?}", g.betti, g.torsion));
            }
        }
    }
    let elapsed = start.elapsed();
    if elapsed >= Duration::from_secs(60) {
        problems.push(format!("over the 60s budget ({:.1}s)", elapsed.as_secs_f64()));
    }
    let detail = if problems.is_empty() {
        format!("{} complexes and 4 spheres in {:.1}s", corpus.len(), elapsed.as_secs_f64())
    } else {
        problems.join("; ")
    };
    Outcome { ok: problems.is_empty(), detail }
}

fn determinism() -> Outcome {
    let config = Config::for_profile(Profile::Default);
    let start = Instant::now();
    let a = run_all(&config);
    let b = run_all(&config);
    let same = a.to_json_without_timings() == b.to_json_without_timings();
    let ids: Vec<String> = a.scenarios.iter().map(|s| format!("{}={}", s.id, s.verdict)).collect();
    Outcome {
        ok: same && a.scenarios.len() == ScenarioId::ALL.len(),
        detail: format!(
            "two default runs in {:.1}s, reports {} modulo timings [{}]",
            start.elapsed().as_secs_f64(),
            if same { "identical" } else { "differ" },
            ids.join(" ")
        ),
    }
}

fn main() -> ExitCode {
    let caps = Caps::for_profile(Profile::Default);
    let criteria: Vec<Criterion> = vec![
        ("1 adjunction sd ⊣ Ex", Box::new(move || adjunction(&caps))),
        ("2 last-vertex homology equivalences", Box::new(move || last_vertex(&caps))),
        ("3 diag_! closed form for horns", Box::new(move || closed_form(&caps))),
        ("4 counit levelwise equivalence and fibers", Box::new(move || counit(&caps))),
        ("5 small object argument fixed point", Box::new(move || small_object(&caps))),
        ("6 Ex horn extension", Box::new(move || ex_extension(&caps))),
        ("7 oracle consistency", Box::new(oracles)),
        ("8 determinism of default verify", Box::new(determinism)),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let o = check();
        println!("{} criterion {name}: {}", if o.ok { "PASS" } else { "FAIL" }, o.detail);
        if !o.ok {
            failed += 1;
        }
    }
    println!("{failed} criterion/criteria failed");
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
