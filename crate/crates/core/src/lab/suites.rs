//! The verification suites. Each one checks a property over a corpus and
//! returns every counterexample it finds.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Arc;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::corpus::{generate_corpus, random_structure, CorpusSpec, Family};
use super::randgen::FormulaGen;
use super::report::{Failure, SuiteReport};
use super::LabError;
use crate::eval::{check_chain_union, holds, is_elementary_substructure, skolem_closure, Evaluator, SemanticsMode};
use crate::games::{cross_check_bounded_with, spoiler_rank, winner_from_rank, winner_with, Player, DgvvReading, GameConfig, GameKind, Rank};
use crate::logic::{dualize, quantifier_rank, subformula_closure, Fml, Formula, Var};
use crate::ordinal::ClockOrdinal;
use crate::structure::{canonical_key, Elem, Structure, Vocabulary};
use crate::synth::{build_example, build_theta_mu, distinguishing_sentence, ExampleKind, ExampleParams};
use crate::textio::{render, render_named_structure};

pub const SUITES: [&str; 11] = [
    "duality",
    "encoding",
    "examples",
    "covering",
    "transitivity",
    "game-logic-sound",
    "distinguisher-complete",
    "dg-implies-ef",
    "rank-collapse",
    "union-chain",
    "skolem-lst",
];

#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub seed: u64,
    /// Largest universe in the game corpora.
    pub nmax: usize,
    /// Largest universe in the exhaustive grids.
    pub grid_nmax: usize,
    /// Split widths tried by the game suites.
    pub thetas: Vec<usize>,
    /// Random sentences per pair in the soundness suite.
    pub formulas_per_pair: usize,
    /// Random cases for the sampling suites; `None` uses each suite's default.
    pub cases: Option<usize>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig { seed: 0, nmax: 4, grid_nmax: 3, thetas: vec![1, 2], formulas_per_pair: 500, cases: None }
    }
}

impl SuiteConfig {
    fn cases_or(&self, default: usize) -> usize {
        self.cases.unwrap_or(default)
    }

    fn rng(&self, salt: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ salt)
    }
}

pub fn run_suite(name: &str, config: &SuiteConfig) -> Result<SuiteReport, LabError> {
    let start = Instant::now();
    let mut report = match name {
        "duality" => duality(config)?,
        "encoding" => encoding(config)?,
        "examples" => examples(config)?,
        "covering" => covering(config)?,
        "transitivity" => transitivity(config)?,
        "game-logic-sound" => game_logic_sound(config)?,
        "distinguisher-complete" => distinguisher_complete(config)?,
        "dg-implies-ef" => dg_implies_ef(config)?,
        "rank-collapse" => rank_collapse(config)?,
        "union-chain" => union_chain(config)?,
        "skolem-lst" => skolem_lst(config)?,
        other => return Err(LabError::UnknownSuite(other.to_string())),
    };
    report.wall_time = start.elapsed();
    Ok(report.finish())
}

const MODES: [SemanticsMode; 2] = [SemanticsMode::Adapted, SemanticsMode::Strict];

fn mixed_vocab() -> Arc<Vocabulary> {
    Arc::new(
        Vocabulary::new([("P".to_string(), 1), ("R".to_string(), 2)], ["c".to_string()]).expect("valid vocabulary"),
    )
}

fn show(name: &str, m: &Structure) -> String {
    render_named_structure(Some(name), m)
}

fn check_cmd(mode: SemanticsMode) -> String {
    format!("splitgame check --structure m.str --formula formula.fml --mode {mode}")
}

/// The game corpora: unary, graphs and posets up to `nmax` elements, one
/// structure per isomorphism class.
pub fn game_corpora(nmax: usize) -> Result<Vec<(&'static str, Vec<Structure>)>, LabError> {
    Ok(vec![
        ("unary", generate_corpus(&CorpusSpec::new(Family::Unary { p_count: 1, n_max: nmax }))?),
        ("graphs", generate_corpus(&CorpusSpec::new(Family::Graphs { n_max: nmax }))?),
        ("posets", generate_corpus(&CorpusSpec::new(Family::Posets { n_max: nmax.min(5) }))?),
    ])
}

/// Unordered pairs `i < j` of a corpus.
fn pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect()
}

/// Spoiler ranks for every ordered pair, computed once per isomorphism
/// class pair.
pub struct RankTable {
    class: Vec<usize>,
    ranks: Vec<Vec<Rank>>,
}

impl RankTable {
    pub fn new(corpus: &[Structure], kind: GameKind, theta: usize) -> Result<Self, LabError> {
        let mut index = HashMap::new();
        let mut reps: Vec<&Structure> = Vec::new();
        let mut class = Vec::with_capacity(corpus.len());
        for s in corpus {
            let id = *index.entry(canonical_key(s)?).or_insert_with(|| {
                reps.push(s);
                reps.len() - 1
            });
            class.push(id);
        }
        let n = reps.len();
        let flat: Vec<Rank> = (0..n * n)
            .into_par_iter()
            .map(|k| spoiler_rank(kind, reps[k / n], reps[k % n], theta))
            .collect::<Result<_, _>>()?;
        let ranks = flat.chunks(n.max(1)).map(|r| r.to_vec()).collect();
        Ok(RankTable { class, ranks })
    }

    pub fn rank(&self, i: usize, j: usize) -> Rank {
        self.ranks[self.class[i]][self.class[j]]
    }

    /// Whether Duplicator wins on `(i, j)` at `clock`.
    pub fn duplicator_wins(&self, i: usize, j: usize, clock: ClockOrdinal) -> bool {
        winner_from_rank(self.rank(i, j), clock) == Player::Duplicator
    }

    pub fn same_class(&self, i: usize, j: usize) -> bool {
        self.class[i] == self.class[j]
    }
}

fn duality(config: &SuiteConfig) -> Result<SuiteReport, LabError> {
    let mut report = SuiteReport::new("duality");
    let vocab = mixed_vocab();
    let gen = FormulaGen::new(vocab.clone(), 3, 3);
    let mut rng = config.rng(1);
    let cases: Vec<(Structure, Fml)> = (0..config.cases_or(1000))
        .map(|_| (random_structure(&mut rng, &vocab, 1, 4), gen.sentence(&mut rng)))
        .collect();
    let results: Vec<Vec<Failure>> = cases
        .par_iter()
        .enumerate()
        .map(|(i, (m, phi))| {
            let dual = dualize(phi);
            let mut out = Vec::new();
            for mode in MODES {
                let a = holds(m, phi, mode)?;
                let b = holds(m, &dual, mode)?;
                let c = holds(m, &dualize(&dual), mode)?;
                if a == b || a != c {
                    out.push(
                        Failure::new(format!("{i:05}-{mode}"), format!("{mode}: phi {a}, dual {b}, double dual {c}"))
                            .structure("m", show("m", m))
                            .formula(render(phi))
                            .command(check_cmd(mode)),
                    );
                }
            }
            Ok(out)
        })
        .collect::<Result<_, LabError>>()?;
    report.cases = cases.len() * MODES.len();
    report.failures = results.into_iter().flatten().collect();
    Ok(report)
}

fn encoding(config: &SuiteConfig) -> Result<SuiteReport, LabError> {
    let mut report = SuiteReport::new("encoding");
    let vocab = mixed_vocab();
    let mut rng = config.rng(2);
    let mut structures = generate_corpus(&CorpusSpec::new(Family::Unary { p_count: 1, n_max: config.grid_nmax }).with_dedup(false))?;
    let unary_count = structures.len();
    let gen_r = FormulaGen::new(vocab.clone(), 2, 2);
    let random: Vec<Structure> = (0..config.cases_or(40)).map(|_| random_structure(&mut rng, &vocab, 1, 3)).collect();
    structures.extend(random);
    let mut cases = Vec::new();
    for theta in 1..=3 {
        for xi in 0..theta {
            let x = Var::new(&format!("x{xi}"));
            cases.push((theta, xi, true, Formula::rel_vars("P", &[&x])));
            for _ in 0..4 {
                cases.push((theta, xi, false, gen_r.formula(&mut rng, std::slice::from_ref(&x))));
            }
        }
    }
    let mut failures = Vec::new();
    let mut count = 0;
    for (theta, xi, unary_only, psi) in &cases {
        let x = Var::new(&format!("x{xi}"));
        let targets: &[Structure] = if *unary_only { &structures[..unary_count] } else { &structures[unary_count..] };
        for (kind, plain) in [
            (ExampleKind::EncodeExists, Formula::exists(x.clone(), psi.clone())),
            (ExampleKind::EncodeForall, Formula::forall(x.clone(), psi.clone())),
        ] {
            let enc = build_example(kind, *theta, &ExampleParams::encode(psi.clone(), *xi))?;
            for (k, m) in targets.iter().enumerate() {
                count += 1;
                let a = holds(m, &enc, SemanticsMode::Adapted)?;
                let b = holds(m, &plain, SemanticsMode::Adapted)?;
                if a != b {
                    failures.push(
                        Failure::new(format!("{kind}-t{theta}-x{xi}-{k:04}"), format!("encoding gives {a}, quantifier gives {b}"))
                            .structure("m", show("m", m))
                            .formula(render(&enc))
                            .command(check_cmd(SemanticsMode::Adapted)),
                    );
                }
            }
        }
    }
    report.cases = count;
    report.failures = failures;
    Ok(report)
}

/// Whether some `k` distinct elements satisfy `rel` on every ordered pair
/// `(t[i], t[j])` with `i < j` (or both orders when `symmetric`).
fn has_pattern(m: &Structure, rel: &str, k: usize, symmetric: bool) -> bool {
    fn go(m: &Structure, rel: &str, k: usize, symmetric: bool, cur: &mut Vec<Elem>) -> bool {
        if cur.len() == k {
            return true;
        }
        for e in m.universe() {
            if cur.contains(&e) {
                continue;
            }
            let ok = cur.iter().all(|&p| {
                m.holds_named(rel, &[p, e]).unwrap_or(false) && (!symmetric || m.holds_named(rel, &[e, p]).unwrap_or(false))
            });
            if ok {
                cur.push(e);
                if go(m, rel, k, symmetric, cur) {
                    return true;
                }
                cur.pop();
            }
        }
        false
    }
    go(m, rel, k, symmetric, &mut Vec::new())
}

fn examples(config: &SuiteConfig) -> Result<SuiteReport, LabError> {
    let mut report = SuiteReport::new("examples");
    let n = config.nmax;
    let unary = generate_corpus(&CorpusSpec::new(Family::Unary { p_count: 1, n_max: n }).with_dedup(false))?;
    let graphs = generate_corpus(&CorpusSpec::new(Family::Graphs { n_max: n }).with_dedup(false))?;
    let posets = generate_corpus(&CorpusSpec::new(Family::Posets { n_max: n.min(4) }).with_dedup(false))?;
    let trees = generate_corpus(&CorpusSpec::new(Family::Trees { branch: 2, depth: 3, n_max: n.max(5) }))?;
    let orders: Vec<Structure> = posets.iter().chain(&trees).cloned().collect();
    type Oracle = fn(&Structure, usize) -> bool;
    let plan: Vec<(ExampleKind, &str, &[Structure], Oracle)> = vec![
        (ExampleKind::CardLt, "P", &unary, |m, t| m.tuples_named("P").map_or(0, |s| s.len()) < t),
        (ExampleKind::NoClique, "R", &graphs, |m, t| !has_pattern(m, "R", t, true)),
        // a descending chain x0 > x1 > ..: Lt(x_j, x_i) for i < j
        (ExampleKind::NoDescChain, "Lt", &orders, |m, t| {
            let mut rev = BTreeMap::new();
            rev.insert("Lt".to_string(), m.tuples_named("Lt").expect("order").iter().map(|p| vec![p[1], p[0]]).collect());
            let flipped = Structure::new(m.vocab().clone(), m.size(), rev, BTreeMap::new()).expect("same universe");
            !has_pattern(&flipped, "Lt", t, false)
        }),
        (ExampleKind::Aronszajn, "Lt", &orders, |m, t| {
            let mut rev = BTreeMap::new();
            rev.insert("Lt".to_string(), m.tuples_named("Lt").expect("order").iter().map(|p| vec![p[1], p[0]]).collect());
            let flipped = Structure::new(m.vocab().clone(), m.size(), rev, BTreeMap::new()).expect("same universe");
            !has_pattern(&flipped, "Lt", t, false)
        }),
        (ExampleKind::NoBranch, "Lt", &orders, |m, t| !has_pattern(m, "Lt", t, false)),
    ];
    let mut count = 0;
    for (kind, rel, corpus, oracle) in plan {
        for theta in [2, 3] {
            let phi = build_example(kind, theta, &ExampleParams::relation(rel))?;
            for (i, m) in corpus.iter().enumerate() {
                count += 1;
                let got = holds(m, &phi, SemanticsMode::Adapted)?;
                let want = oracle(m, theta);
                if got != want {
                    report.failures.push(
                        Failure::new(format!("{kind}-t{theta}-{i:04}"), format!("sentence says {got}, brute force says {want}"))
                            .structure("m", show("m", m))
                            .formula(render(&phi))
                            .command(check_cmd(SemanticsMode::Adapted)),
                    );
                }
            }
        }
    }
    report.cases = count;
    Ok(report)
}

fn covering(config: &SuiteConfig) -> Result<SuiteReport, LabError> {
    let mut report = SuiteReport::new("covering");
    let all = generate_corpus(&CorpusSpec::new(Family::Digraphs { n_max: config.grid_nmax }).with_dedup(false))?;
    let mut count = 0;
    for mu in [1, 2] {
        let theta_mu = build_theta_mu(mu, "R")?;
        let outcomes: Vec<(bool, bool)> = all
            .par_iter()
            .map(|m| Ok((holds(m, &theta_mu, SemanticsMode::Adapted)?, crate::eval::covering_class_oracle(m, "R", mu)?)))
            .collect::<Result<_, LabError>>()?;
        for (i, (m, (got, want))) in all.iter().zip(outcomes).enumerate() {
            count += 1;
            if got != want {
                report.failures.push(
                    Failure::new(format!("theta-mu{mu}-{i:04}"), format!("sentence says {got}, covering oracle says {want}"))
                        .structure("m", show("m", m))
                        .formula(render(&theta_mu))
                        .command(check_cmd(SemanticsMode::Adapted)),
                );
            }
        }
        // closure of the class under rank-2 equivalence at width mu + 1
        let reps = super::corpus::dedup_isomorphic(all.clone());
        let table = RankTable::new(&reps, GameKind::Efc, mu + 1)?;
        let member: Vec<bool> =
            reps.iter().map(|m| crate::eval::covering_class_oracle(m, "R", mu)).collect::<Result<_, _>>()?;
        let mut closure_cases = 0;
        for (i, j) in pairs(reps.len()) {
            if table.duplicator_wins(i, j, ClockOrdinal::finite(2)) {
                closure_cases += 1;
                if member[i] != member[j] {
                    report.failures.push(
                        Failure::new(
                            format!("closure-mu{mu}-{i:03}-{j:03}"),
                            format!("equivalent at clock 2 with theta {} but covering membership differs", mu + 1),
                        )
                        .structure("left", show("left", &reps[i]))
                        .structure("right", show("right", &reps[j]))
                        .command(format!("splitgame solve --game efc --left left.str --right right.str --theta {} --clock 2", mu + 1)),
                    );
                }
            }
        }
        count += closure_cases;
        report.notes.push(format!("mu {mu}: {closure_cases} pairs equivalent at clock 2 checked for closure"));
    }
    report.cases = count;
    Ok(report)
}

fn transitivity(config: &SuiteConfig) -> Result<SuiteReport, LabError> {
    let mut report = SuiteReport::new("transitivity");
    let corpora = vec![
        ("graphs", generate_corpus(&CorpusSpec::new(Family::Graphs { n_max: config.nmax }).with_dedup(false))?),
        ("unary", generate_corpus(&CorpusSpec::new(Family::Unary { p_count: 1, n_max: config.nmax }).with_dedup(false))?),
    ];
    let mut count = 0;
    for (name, corpus) in &corpora {
        for &theta in &config.thetas {
            let table = RankTable::new(corpus, GameKind::Efc, theta)?;
            let n = corpus.len();
            for c in 0..=3u64 {
                let clock = ClockOrdinal::finite(c);
                let eq = |i: usize, j: usize| table.duplicator_wins(i, j, clock);
                for i in 0..n {
                    for j in 0..n {
                        if !eq(i, j) {
                            continue;
                        }
                        for k in 0..n {
                            count += 1;
                            if eq(j, k) && !eq(i, k) {
                                report.failures.push(
                                    Failure::new(
                                        format!("{name}-t{theta}-c{c}-{i:03}-{j:03}-{k:03}"),
                                        format!("{i} ~ {j} ~ {k} but {i} and {k} are separated at clock {c}"),
                                    )
                                    .structure("a", show("a", &corpus[i]))
                                    .structure("b", show("b", &corpus[j]))
                                    .structure("c", show("c", &corpus[k])),
                                );
                            }
                        }
                    }
                }
            }
        }
    }
    report.cases = count;
    Ok(report)
}

/// Largest clock at which Duplicator wins, capped at `cap`.
fn duplicator_clock(rank: Rank, cap: u64) -> Option<u64> {
    match rank.as_finite() {
        Some(0) => None,
        Some(r) => Some((r - 1).min(cap)),
        None => Some(cap),
    }
}

fn game_logic_sound(config: &SuiteConfig) -> Result<SuiteReport, LabError> {
    let mut report = SuiteReport::new("game-logic-sound");
    let mut count = 0;
    let mut disagreements = 0;
    for (name, corpus) in game_corpora(config.nmax)? {
        for &theta in &config.thetas {
            let table = RankTable::new(&corpus, GameKind::Efc, theta)?;
            let jobs: Vec<(usize, usize, u64)> = pairs(corpus.len())
                .into_iter()
                .filter(|&(i, j)| !table.same_class(i, j))
                .filter_map(|(i, j)| duplicator_clock(table.rank(i, j), 3).map(|c| (i, j, c)))
                .collect();
            let vocab = corpus[0].vocab().clone();
            let results: Vec<(usize, Option<Failure>)> = jobs
                .par_iter()
                .map(|&(i, j, clock)| {
                    let salt = (theta as u64) << 40 ^ (i as u64) << 20 ^ j as u64 ^ name.len() as u64;
                    let mut rng = config.rng(salt);
                    let gen = FormulaGen::new(vocab.clone(), clock as u32, theta);
                    let (m, n) = (&corpus[i], &corpus[j]);
                    let mut em = Evaluator::new(m, SemanticsMode::Adapted);
                    let mut en = Evaluator::new(n, SemanticsMode::Adapted);
                    let empty = BTreeMap::new();
                    let mut bad = 0;
                    let mut first = None;
                    for _ in 0..config.formulas_per_pair {
                        let phi = gen.sentence(&mut rng);
                        let (a, b) = (em.eval(&phi, &empty)?, en.eval(&phi, &empty)?);
                        if a != b {
                            bad += 1;
                            if first.is_none() {
                                first = Some(
                                    Failure::new(
                                        format!("{name}-t{theta}-{i:03}-{j:03}"),
                                        format!(
                                            "Duplicator wins at clock {clock} (theta {theta}) but a sentence of rank {} separates: left {a}, right {b}",
                                            quantifier_rank(&phi)
                                        ),
                                    )
                                    .structure("left", show("left", m))
                                    .structure("right", show("right", n))
                                    .formula(render(&phi))
                                    .command(format!(
                                        "splitgame solve --game efc --left left.str --right right.str --theta {theta} --clock {clock}"
                                    )),
                                );
                            }
                        }
                    }
                    Ok((bad, first))
                })
                .collect::<Result<_, LabError>>()?;
            count += jobs.len() * config.formulas_per_pair;
            for (bad, first) in results {
                disagreements += bad;
                report.failures.extend(first);
            }
        }
    }
    report.cases = count;
    report.notes.push(format!("{disagreements} disagreeing sentences in total"));
    Ok(report)
}

fn distinguisher_complete(config: &SuiteConfig) -> Result<SuiteReport, LabError> {
    let mut report = SuiteReport::new("distinguisher-complete");
    let mut count = 0;
    for (name, corpus) in game_corpora(config.nmax)? {
        for &theta in &config.thetas {
            let table = RankTable::new(&corpus, GameKind::Efc, theta)?;
            let jobs: Vec<(usize, usize, u64)> = pairs(corpus.len())
                .into_iter()
                .flat_map(|(i, j)| [(i, j), (j, i)])
                .filter_map(|(i, j)| table.rank(i, j).as_finite().map(|r| (i, j, r)))
                .collect();
            let results: Vec<Option<Failure>> = jobs
                .par_iter()
                .map(|&(i, j, r)| {
                    let (m, n) = (&corpus[i], &corpus[j]);
                    let fail = |msg: String| {
                        Failure::new(format!("{name}-t{theta}-{i:03}-{j:03}"), msg)
                            .structure("left", show("left", m))
                            .structure("right", show("right", n))
                            .command(format!("splitgame distinguish --left left.str --right right.str --theta {theta}"))
                    };
                    let phi = match distinguishing_sentence(m, n, theta) {
                        Ok(phi) => phi,
                        Err(e) => return Ok(Some(fail(format!("rank {r} but extraction failed: {e}")))),
                    };
                    let q = u64::from(quantifier_rank(&phi));
                    let (a, b) = (holds(m, &phi, SemanticsMode::Adapted)?, holds(n, &phi, SemanticsMode::Adapted)?);
                    Ok((q > r || phi.max_width() > theta || !a || b).then(|| {
                        fail(format!("rank {r}: sentence of rank {q}, width {}, left {a}, right {b}", phi.max_width()))
                            .formula(render(&phi))
                    }))
                })
                .collect::<Result<_, LabError>>()?;
            count += jobs.len();
            report.failures.extend(results.into_iter().flatten());
        }
    }
    report.cases = count;
    Ok(report)
}

fn dg_implies_ef(config: &SuiteConfig) -> Result<SuiteReport, LabError> {
    let mut report = SuiteReport::new("dg-implies-ef");
    let mut count = 0;
    for (name, corpus) in game_corpora(config.nmax)? {
        for &theta in &config.thetas {
            let efc = RankTable::new(&corpus, GameKind::Efc, theta)?;
            let dg = RankTable::new(&corpus, GameKind::Dg, theta)?;
            let mut table: BTreeMap<(String, String), usize> = BTreeMap::new();
            let mut literal = 0;
            for (i, j) in pairs(corpus.len()) {
                count += 1;
                let (rd, re) = (dg.rank(i, j), efc.rank(i, j));
                *table.entry((rd.to_string(), re.to_string())).or_default() += 1;
                if rd == ClockOrdinal::Infinity && re != ClockOrdinal::Infinity {
                    report.failures.push(
                        Failure::new(format!("{name}-t{theta}-{i:03}-{j:03}"), format!("delayed rank infinite, split EF rank {re}"))
                            .structure("left", show("left", &corpus[i]))
                            .structure("right", show("right", &corpus[j])),
                    );
                }
                // Duplicator surviving w*beta in the delayed game but losing
                // the split EF game at beta, for some beta >= 1
                if let (ClockOrdinal::Below { omega, finite }, Some(e)) = (rd, re.as_finite()) {
                    let dg_survives = |beta: u64| omega > beta || (omega == beta && finite > 0);
                    if (1..=3).any(|beta| dg_survives(beta) && e <= beta) {
                        literal += 1;
                    }
                }
            }
            let cells: Vec<String> = table.iter().map(|((d, e), k)| format!("({d}, {e}): {k}")).collect();
            report.notes.push(format!("{name} theta {theta}: (delayed rank, split EF rank) counts {}", cells.join("; ")));
            report.notes.push(format!(
                "{name} theta {theta}: {literal} pairs where Duplicator survives w*beta in the delayed game but loses the split EF game at beta (beta <= 3)"
            ));
        }
    }
    report.cases = count;
    Ok(report)
}

/// Clocks used by the exhaustive cross-check grid.
pub const GRID_CLOCKS: [ClockOrdinal; 7] = [
    ClockOrdinal::finite(0),
    ClockOrdinal::finite(1),
    ClockOrdinal::finite(2),
    ClockOrdinal::finite(3),
    ClockOrdinal::new(1, 0),
    ClockOrdinal::new(1, 1),
    ClockOrdinal::new(2, 0),
];

/// Cross-checks `winner` against the direct oracle on every ordered pair
/// of `corpus`, returning the number of checks and the disagreements.
pub fn cross_check_grid(
    label: &str,
    corpus: &[Structure],
    kind: GameKind,
    thetas: &[usize],
    clocks: &[ClockOrdinal],
    config: GameConfig,
) -> Result<(usize, Vec<Failure>), LabError> {
    let jobs: Vec<(usize, usize, usize)> = thetas
        .iter()
        .flat_map(|&t| (0..corpus.len()).flat_map(move |i| (0..corpus.len()).map(move |j| (t, i, j))))
        .collect();
    let results: Vec<Vec<Failure>> = jobs
        .par_iter()
        .map(|&(theta, i, j)| {
            let (m, n) = (&corpus[i], &corpus[j]);
            let mut out = Vec::new();
            for &clock in clocks {
                let fast = winner_with(kind, m, n, theta, clock, config)?;
                let slow = cross_check_bounded_with(kind, m, n, theta, clock, config)?;
                if fast != slow {
                    out.push(
                        Failure::new(
                            format!("{label}-{kind}-t{theta}-{i:03}-{j:03}-{clock}"),
                            format!("solver says {fast}, direct search says {slow}"),
                        )
                        .structure("left", show("left", m))
                        .structure("right", show("right", n))
                        .command(format!(
                            "splitgame solve --game {kind} --left left.str --right right.str --theta {theta} --clock {clock}"
                        )),
                    );
                }
            }
            Ok(out)
        })
        .collect::<Result<_, LabError>>()?;
    Ok((jobs.len() * clocks.len(), results.into_iter().flatten().collect()))
}

fn rank_collapse(config: &SuiteConfig) -> Result<SuiteReport, LabError> {
    let mut report = SuiteReport::new("rank-collapse");
    let g = config.grid_nmax;
    let unary = generate_corpus(&CorpusSpec::new(Family::Unary { p_count: 1, n_max: g }))?;
    let digraphs = generate_corpus(&CorpusSpec::new(Family::Digraphs { n_max: g }))?;
    let small_unary = generate_corpus(&CorpusSpec::new(Family::Unary { p_count: 1, n_max: g.min(2) }))?;
    let plain = GameConfig::default();
    let mut plan = vec![
        ("unary", &unary, GameKind::Efc, config.thetas.clone(), GRID_CLOCKS.to_vec(), plain),
        ("digraphs", &digraphs, GameKind::Efc, config.thetas.clone(), GRID_CLOCKS.to_vec(), plain),
    ];
    let delayed_clocks = GRID_CLOCKS[..6].to_vec();
    plan.push(("unary", &small_unary, GameKind::Dg, vec![1], delayed_clocks.clone(), plain));
    for reading in [DgvvReading::Corrected, DgvvReading::Literal] {
        let cfg = GameConfig { dgvv_reading: reading };
        plan.push(("unary", &small_unary, GameKind::Dgvv { alpha: 2 }, vec![1], GRID_CLOCKS[..5].to_vec(), cfg));
    }
    for (label, corpus, kind, thetas, clocks, cfg) in plan {
        let (n, fails) = cross_check_grid(label, corpus, kind, &thetas, &clocks, cfg)?;
        report.cases += n;
        report.failures.extend(fails);
    }
    Ok(report)
}

fn random_fragment<R: Rng>(rng: &mut R, vocab: &Arc<Vocabulary>) -> (Fml, crate::logic::Fragment) {
    let gen = FormulaGen { max_nodes: 30, ..FormulaGen::new(vocab.clone(), 2, 2) };
    loop {
        let phi = gen.sentence(rng);
        if phi.max_width() > 0 {
            let t = subformula_closure(&phi);
            return (phi, t);
        }
    }
}

fn union_chain(config: &SuiteConfig) -> Result<SuiteReport, LabError> {
    let mut report = SuiteReport::new("union-chain");
    let vocab = Arc::new(Vocabulary::relational(&[("P", 1), ("R", 2)]));
    let mut rng = config.rng(10);
    let cases: Vec<(Vec<Structure>, Fml, crate::logic::Fragment)> = (0..config.cases_or(200))
        .map(|_| {
            let top = random_structure(&mut rng, &vocab, 4, 6);
            let mut sizes: BTreeSet<usize> = BTreeSet::new();
            while sizes.len() < 3 {
                sizes.insert(rng.gen_range(1..top.size()));
            }
            let mut chain: Vec<Structure> = sizes
                .iter()
                .map(|&k| top.induced(&(0..k).collect()).expect("prefix of the universe").0)
                .collect();
            chain.push(top);
            let (phi, t) = random_fragment(&mut rng, &vocab);
            (chain, phi, t)
        })
        .collect();
    let results: Vec<(bool, Option<Failure>)> = cases
        .par_iter()
        .enumerate()
        .map(|(i, (chain, phi, t))| {
            let r = check_chain_union(chain, t, SemanticsMode::Adapted)?;
            let all = r.adjacent.iter().all(|&b| b);
            let fail = (!r.consistent()).then(|| {
                let mut f = Failure::new(format!("{i:04}"), "every adjacent pair is elementary but the ends are not").formula(render(phi));
                for (k, s) in chain.iter().enumerate() {
                    f = f.structure(&format!("m{k}"), show(&format!("m{k}"), s));
                }
                f
            });
            Ok((all, fail))
        })
        .collect::<Result<_, LabError>>()?;
    report.cases = cases.len();
    let elementary = results.iter().filter(|r| r.0).count();
    report.failures = results.into_iter().filter_map(|r| r.1).collect();
    report.notes.push(format!("{elementary} chains had every adjacent pair elementary"));
    Ok(report)
}

fn skolem_lst(config: &SuiteConfig) -> Result<SuiteReport, LabError> {
    let mut report = SuiteReport::new("skolem-lst");
    let vocab = mixed_vocab();
    let mut rng = config.rng(11);
    let cases: Vec<(Structure, Fml, crate::logic::Fragment, BTreeSet<Elem>)> = (0..config.cases_or(100))
        .map(|_| {
            let m = random_structure(&mut rng, &vocab, 2, 6);
            let mut seed: BTreeSet<Elem> = m.universe().filter(|_| rng.gen_bool(0.3)).collect();
            if seed.is_empty() {
                seed.insert(rng.gen_range(0..m.size()));
            }
            let (phi, t) = random_fragment(&mut rng, &vocab);
            (m, phi, t, seed)
        })
        .collect();
    let results: Vec<(usize, Option<Failure>)> = cases
        .par_iter()
        .enumerate()
        .map(|(i, (m, phi, t, seed))| {
            let sub = skolem_closure(m, t, seed, SemanticsMode::Adapted)?;
            let ok = is_elementary_substructure(&sub, m, t, SemanticsMode::Adapted)?;
            let seed_text = seed.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(",");
            let fail = (!ok).then(|| {
                Failure::new(format!("{i:04}"), format!("closure of {{{seed_text}}} is {:?}, not elementary", sub.embedding))
                    .structure("m", show("m", m))
                    .formula(render(phi))
                    .command(format!("splitgame skolem --structure m.str --fragment formula.fml --seed-elems \"{seed_text}\""))
            });
            Ok((sub.structure.size(), fail))
        })
        .collect::<Result<_, LabError>>()?;
    report.cases = cases.len();
    let proper = results.iter().zip(&cases).filter(|(r, c)| r.0 < c.0.size()).count();
    report.failures = results.into_iter().filter_map(|r| r.1).collect();
    report.notes.push(format!("{proper} closures were proper substructures"));
    Ok(report)
}

/// Reports for every suite, in the order of [`SUITES`].
pub fn run_all(config: &SuiteConfig) -> Result<Vec<SuiteReport>, LabError> {
    SUITES.iter().map(|s| run_suite(s, config)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick() -> SuiteConfig {
        SuiteConfig { nmax: 3, grid_nmax: 2, formulas_per_pair: 20, cases: Some(20), ..SuiteConfig::default() }
    }

    #[test]
    fn unknown_suite() {
        assert!(matches!(run_suite("nope", &quick()), Err(LabError::UnknownSuite(_))));
    }

    #[test]
    fn quick_suites_pass() {
        for name in ["duality", "encoding", "union-chain", "skolem-lst", "rank-collapse", "transitivity", "distinguisher-complete"] {
            let r = run_suite(name, &quick()).unwrap();
            assert!(r.passed(), "{r}");
            assert!(r.cases > 0);
        }
    }

    #[test]
    fn reports_are_deterministic() {
        let a = run_suite("duality", &quick()).unwrap();
        let b = run_suite("duality", &quick()).unwrap();
        assert_eq!(a.to_json_lines(), b.to_json_lines());
    }
}
