//! Acceptance gate: one PASS/FAIL line per criterion, all parameters pinned.
//! Runs every verification suite at full size with seed 0.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use splitgame::lab::{classify, generate_corpus, run_suite, CorpusSpec, Family, SuiteConfig, SuiteReport};
use splitgame::ordinal::ClockOrdinal;

const SEED: u64 = 0;
const NMAX: usize = 4;
const GRID_NMAX: usize = 3;
const THETAS: [usize; 2] = [1, 2];
const FORMULAS_PER_PAIR: usize = 500;
const RANK_COLLAPSE_BUDGET: Duration = Duration::from_secs(5 * 60);
const TRANSITIVITY_BUDGET: Duration = Duration::from_secs(10 * 60);

struct Verdict {
    id: u32,
    title: &'static str,
    ok: bool,
    detail: String,
}

fn config() -> SuiteConfig {
    SuiteConfig {
        seed: SEED,
        nmax: NMAX,
        grid_nmax: GRID_NMAX,
        thetas: THETAS.to_vec(),
        formulas_per_pair: FORMULAS_PER_PAIR,
        cases: None,
    }
}

fn suite(name: &str) -> (SuiteReport, Duration) {
    let start = Instant::now();
    let report = run_suite(name, &config()).unwrap_or_else(|e| panic!("suite {name} errored: {e}"));
    (report, start.elapsed())
}

fn summary(r: &SuiteReport, t: Duration) -> String {
    let mut s = format!("{} cases, {} failures, {:.1}s", r.cases, r.failures.len(), t.as_secs_f64());
    if let Some(f) = r.failures.first() {
        s.push_str(&format!("; first [{}] {}", f.key, f.message));
    }
    s
}

fn suite_verdict(id: u32, title: &'static str, name: &str, extra: impl Fn(&SuiteReport, Duration) -> Result<(), String>) -> Verdict {
    let (r, t) = suite(name);
    let mut detail = summary(&r, t);
    let extra_ok = match extra(&r, t) {
        Ok(()) => true,
        Err(why) => {
            detail.push_str(&format!("; {why}"));
            false
        }
    };
    Verdict { id, title, ok: r.passed() && extra_ok, detail }
}

fn at_least(what: &'static str, n: usize) -> impl Fn(&SuiteReport, Duration) -> Result<(), String> {
    move |r, _| if r.cases >= n { Ok(()) } else { Err(format!("only {} {what}, need {n}", r.cases)) }
}

fn within(budget: Duration) -> impl Fn(&SuiteReport, Duration) -> Result<(), String> {
    move |_, t| if t <= budget { Ok(()) } else { Err(format!("took longer than {}s", budget.as_secs())) }
}

fn counting() -> Verdict {
    let unary = generate_corpus(&CorpusSpec::new(Family::Unary { p_count: 1, n_max: 2 }).sizes(2)).expect("unary corpus");
    let classes = classify(&unary, 1, ClockOrdinal::finite(1)).expect("classify").len();
    let posets = generate_corpus(&CorpusSpec::new(Family::Posets { n_max: 3 }).sizes(3)).expect("poset corpus").len();
    Verdict {
        id: 11,
        title: "counting sanity",
        ok: classes == 3 && posets == 5,
        detail: format!("unary size 2 at theta 1, clock 1: {classes} classes (want 3); 3-element posets: {posets} (want 5)"),
    }
}

fn main() -> ExitCode {
    let verdicts = vec![
        suite_verdict(1, "rank collapse: winner matches bounded search", "rank-collapse", within(RANK_COLLAPSE_BUDGET)),
        suite_verdict(2, "transitivity on graphs up to 4 elements", "transitivity", within(TRANSITIVITY_BUDGET)),
        suite_verdict(3, "game/logic soundness", "game-logic-sound", |_, _| Ok(())),
        suite_verdict(4, "constructive completeness", "distinguisher-complete", |_, _| Ok(())),
        suite_verdict(5, "covering sentence and rank-2 closure", "covering", |_, _| Ok(())),
        suite_verdict(6, "example sentences vs brute force", "examples", |_, _| Ok(())),
        suite_verdict(7, "union of elementary chains", "union-chain", at_least("chains", 200)),
        suite_verdict(8, "Skolem closures are elementary", "skolem-lst", at_least("closures", 100)),
        suite_verdict(9, "delayed game implies split EF game", "dg-implies-ef", |r, _| {
            if r.notes.iter().any(|n| n.contains("counts")) {
                Ok(())
            } else {
                Err("no rank table emitted".into())
            }
        }),
        suite_verdict(10, "dualize is semantic negation", "duality", at_least("cases", 1000)),
        counting(),
    ];
    let mut failed = 0;
    for v in &verdicts {
        println!("{} criterion {:>2} ({}): {}", if v.ok { "PASS" } else { "FAIL" }, v.id, v.title, v.detail);
        failed += usize::from(!v.ok);
    }
    println!("{} of {} criteria pass", verdicts.len() - failed, verdicts.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
