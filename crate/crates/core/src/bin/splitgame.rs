use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};

use splitgame::eval::{holds, skolem_closure, SemanticsMode};
use splitgame::games::{spoiler_rank_with, spoiler_witness, winner_from_rank, DgvvReading, GameConfig, GameKind, GamePosition};
use splitgame::lab::corpus::{generate_corpus, CorpusSpec, Family};
use splitgame::lab::{classify, run_suite, SuiteConfig, SUITES};
use splitgame::logic::subformula_closure;
use splitgame::ordinal::ClockOrdinal;
use splitgame::structure::{Structure, Vocabulary};
use splitgame::synth::{distinguishing_sentence, SynthError};
use splitgame::textio::{parse_corpus, parse_formula, parse_structure, render, render_named_structure, SourceText};

type Res<T> = Result<T, Box<dyn std::error::Error>>;

#[derive(Parser)]
#[command(name = "splitgame", version, about = "Split-quantifier logic lab: model checking, games and sentence synthesis")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Evaluate a sentence in a structure (exit 0 if true, 1 if false).
    Check {
        #[arg(long)]
        structure: PathBuf,
        #[arg(long)]
        formula: PathBuf,
        #[arg(long, default_value = "adapted")]
        mode: SemanticsMode,
    },
    /// Solve a game: print the winner at the clock and the Spoiler rank.
    Solve {
        #[arg(long, default_value = "efc")]
        game: GameKind,
        #[arg(long)]
        left: PathBuf,
        #[arg(long)]
        right: PathBuf,
        #[arg(long)]
        theta: usize,
        #[arg(long, default_value = "inf")]
        clock: ClockOrdinal,
        #[arg(long, default_value = "corrected")]
        dgvv_reading: DgvvReading,
    },
    /// Extract a sentence true on the left and false on the right (exit 3
    /// when none exists).
    Distinguish {
        #[arg(long)]
        left: PathBuf,
        #[arg(long)]
        right: PathBuf,
        #[arg(long)]
        theta: usize,
        /// Output file; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Partition the structures in a directory of `.str` files by game
    /// equivalence.
    Classify {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long)]
        theta: usize,
        #[arg(long)]
        clock: ClockOrdinal,
    },
    /// Write a generated corpus, one `.str` file per structure.
    Gen {
        #[arg(long, value_enum)]
        family: FamilyArg,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 3)]
        nmax: usize,
        /// Keep isomorphic copies.
        #[arg(long)]
        no_dedup: bool,
        /// Number of structures for the random family.
        #[arg(long, default_value_t = 20)]
        count: usize,
        #[arg(long, default_value_t = 2)]
        branch: usize,
        #[arg(long, default_value_t = 2)]
        depth: usize,
    },
    /// Run verification suites (exit 0 iff no failures).
    Verify {
        #[arg(long, required_unless_present = "all")]
        suite: Option<String>,
        #[arg(long)]
        all: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        nmax: Option<usize>,
        /// JSON-lines output file.
        #[arg(long, default_value = "verify.jsonl")]
        jsonl: PathBuf,
        /// Directory for replayable failure artifacts.
        #[arg(long)]
        artifacts: Option<PathBuf>,
    },
    /// Close a seed set under the Skolem functions of a fragment and write
    /// the induced substructure.
    Skolem {
        #[arg(long)]
        structure: PathBuf,
        #[arg(long)]
        fragment: PathBuf,
        #[arg(long, default_value = "")]
        seed_elems: String,
        #[arg(long, default_value = "adapted")]
        mode: SemanticsMode,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    Unary,
    Graphs,
    Posets,
    Trees,
    Random,
}

fn read_structure(path: &Path) -> Res<Structure> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    Ok(parse_structure(&SourceText::new(text, path.display().to_string()))?)
}

fn read_formula(path: &Path, vocab: &Vocabulary) -> Res<splitgame::logic::Fml> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    Ok(parse_formula(&SourceText::new(text, path.display().to_string()), vocab)?)
}

fn emit(out: Option<&Path>, text: &str) -> Res<()> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| format!("{}: {e}", p.display()).into()),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cmd: Cmd) -> Res<ExitCode> {
    match cmd {
        Cmd::Check { structure, formula, mode } => {
            let m = read_structure(&structure)?;
            let phi = read_formula(&formula, m.vocab())?;
            let v = holds(&m, &phi, mode)?;
            println!("{v}");
            Ok(ExitCode::from(if v { 0 } else { 1 }))
        }
        Cmd::Solve { game, left, right, theta, clock, dgvv_reading } => {
            let (m, n) = (read_structure(&left)?, read_structure(&right)?);
            let rank = spoiler_rank_with(game, &m, &n, theta, GameConfig { dgvv_reading })?;
            println!("winner: {}", winner_from_rank(rank, clock));
            println!("rank: {rank}");
            if !matches!(game, GameKind::Dgvv { .. }) || dgvv_reading == DgvvReading::Corrected {
                let pos = GamePosition::initial(game, &m, &n, theta, clock)?;
                if let Some(w) = spoiler_witness(&pos, &m, &n)? {
                    let elems: Vec<String> = w.challenge.iter().map(|e| e.to_string()).collect();
                    println!("spoiler opens: clock {} side {:?} challenge {{{}}}", w.clock, w.side, elems.join(", "));
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Distinguish { left, right, theta, out } => {
            let (m, n) = (read_structure(&left)?, read_structure(&right)?);
            match distinguishing_sentence(&m, &n, theta) {
                Ok(phi) => {
                    emit(out.as_deref(), &render(&phi))?;
                    Ok(ExitCode::SUCCESS)
                }
                Err(SynthError::NoDistinguisher) => {
                    eprintln!("equivalent: Duplicator wins the game without clock at theta {theta}");
                    Ok(ExitCode::from(3))
                }
                Err(e) => Err(e.into()),
            }
        }
        Cmd::Classify { corpus, theta, clock } => {
            let mut files: Vec<PathBuf> = fs::read_dir(&corpus)?
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|p| p.extension().is_some_and(|x| x == "str"))
                .collect();
            files.sort();
            let mut names = Vec::new();
            let mut structures = Vec::new();
            for f in &files {
                let text = fs::read_to_string(f)?;
                let stem = f.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
                for (k, (name, s)) in parse_corpus(&SourceText::new(text, f.display().to_string()))?.into_iter().enumerate() {
                    names.push(name.unwrap_or_else(|| format!("{stem}#{k}")));
                    structures.push(s);
                }
            }
            let classes = classify(&structures, theta, clock)?;
            for (i, class) in classes.iter().enumerate() {
                let members: Vec<&str> = class.iter().map(|&k| names[k].as_str()).collect();
                println!("class {i}: {}", members.join(" "));
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Gen { family, out, seed, nmax, no_dedup, count, branch, depth } => {
            let (label, fam) = match family {
                FamilyArg::Unary => ("unary", Family::Unary { p_count: 1, n_max: nmax }),
                FamilyArg::Graphs => ("graph", Family::Graphs { n_max: nmax }),
                FamilyArg::Posets => ("poset", Family::Posets { n_max: nmax }),
                FamilyArg::Trees => ("tree", Family::Trees { branch, depth, n_max: nmax }),
                FamilyArg::Random => {
                    let vocab = Arc::new(Vocabulary::new([("P".to_string(), 1), ("R".to_string(), 2)], ["c".to_string()])?);
                    ("random", Family::Random { vocab, n_max: nmax, count, seed })
                }
            };
            let corpus = generate_corpus(&CorpusSpec::new(fam).with_dedup(!no_dedup))?;
            fs::create_dir_all(&out)?;
            for (i, s) in corpus.iter().enumerate() {
                let name = format!("{label}_{i:04}");
                fs::write(out.join(format!("{name}.str")), render_named_structure(Some(&name), s))?;
            }
            println!("wrote {} structures to {}", corpus.len(), out.display());
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Verify { suite, all, seed, nmax, jsonl, artifacts } => {
            let mut config = SuiteConfig { seed, ..SuiteConfig::default() };
            if let Some(n) = nmax {
                config.nmax = n;
                config.grid_nmax = config.grid_nmax.min(n);
            }
            let names: Vec<String> = if all { SUITES.iter().map(|s| s.to_string()).collect() } else { suite.into_iter().collect() };
            let mut lines = String::new();
            let mut failed = false;
            for name in &names {
                let report = run_suite(name, &config)?;
                print!("{report}");
                lines.push_str(&report.to_json_lines());
                failed |= !report.passed();
                if let Some(dir) = &artifacts {
                    report.write_artifacts(dir)?;
                }
            }
            fs::write(&jsonl, lines)?;
            Ok(if failed { ExitCode::from(1) } else { ExitCode::SUCCESS })
        }
        Cmd::Skolem { structure, fragment, seed_elems, mode, out } => {
            let m = read_structure(&structure)?;
            let phi = read_formula(&fragment, m.vocab())?;
            let seed = seed_elems
                .split(',')
                .map(str::trim)
                .filter(|s| !s.is_empty())
                .map(|s| s.parse::<usize>().map_err(|e| format!("bad element `{s}`: {e}")))
                .collect::<Result<BTreeSet<_>, _>>()?;
            let sub = skolem_closure(&m, &subformula_closure(&phi), &seed, mode)?;
            let embed: Vec<String> = sub.embedding.iter().map(|e| e.to_string()).collect();
            eprintln!("closure: elements {{{}}} of {}", embed.join(", "), m.size());
            emit(out.as_deref(), &render_named_structure(Some("closure"), &sub.structure))?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
