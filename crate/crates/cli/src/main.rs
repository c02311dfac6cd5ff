use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use zeckendorf_automata::automata::{from_text, to_dot, to_dot_dfao, Automaton, Dfa, Dfao};
use zeckendorf_automata::buchi::{affine_pipeline, subseq_pipeline, BuildReport};
use zeckendorf_automata::constants::{
    ADD_CONST_PER_BIT, AFFINE_PER_N_SQUARED, LINEAR_PER_M2_N4, SHIFT_PER_OFFSET,
};
use zeckendorf_automata::numeration::{encode, ZeckWord};
use zeckendorf_automata::relations;
use zeckendorf_automata::subsequences::{
    fib_thue_morse, fib_word, linear_subseq, linear_subseq_build, shift, to_morphism,
};
use zeckendorf_automata::verify::{
    growth_probe, oeis_a372846, oeis_a385021, oracle_check, OracleSpec, Relation, Sequence,
    SizeModel,
};
use zeckendorf_automata::Error;

/// Finite automata for arithmetic on Fibonacci representations.
#[derive(Parser, Debug)]
#[command(name = "zeck", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Output {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, alias = "export", global = true)]
    format: Format,
    /// Write the automaton here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Print state and transition counts (dead state excluded) to stderr.
    #[arg(long, global = true)]
    stats: bool,
}

#[derive(Args, Debug, Clone)]
struct Config {
    /// Skip the final minimization.
    #[arg(long, global = true)]
    no_minimize: bool,
    #[command(flatten)]
    output: Output,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Dot,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Fibonacci representation of a number.
    Encode { n: u64 },
    /// Value of a representation, most significant digit first.
    Decode { word: String },
    /// Build a recognizer for an arithmetic relation.
    Build {
        #[command(subcommand)]
        relation: BuildKind,
        #[command(flatten)]
        config: Config,
    },
    /// Build a DFAO for a subsequence of an automatic sequence.
    Subseq {
        #[command(subcommand)]
        kind: SubseqKind,
    },
    /// Evaluate sequences.
    Seq {
        #[command(subcommand)]
        kind: SeqKind,
    },
    /// Build through products, projection and determinization from the adder.
    Pipeline {
        #[command(subcommand)]
        kind: PipelineKind,
        /// Write the stage report here.
        #[arg(long, global = true)]
        report: Option<PathBuf>,
        #[command(flatten)]
        output: Output,
    },
    /// Check constructions against arithmetic and published tables.
    Verify {
        #[command(subcommand)]
        kind: VerifyKind,
    },
    /// Read an automaton file and write it back in canonical form.
    Export {
        file: PathBuf,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Subcommand, Debug, Clone)]
enum BuildKind {
    /// [x] + c = [y]
    AddConst { c: u64 },
    /// [x] - c = [y]
    SubConst { c: u64 },
    /// n[x] + c = [y]
    Affine { n: u64, c: u64 },
    /// [x] = c
    EqConst { c: u64 },
    /// [x] + [y] = [z]
    Adder,
}

#[derive(Subcommand, Debug)]
enum SubseqKind {
    /// i -> h(i + c)
    Shift {
        /// `fib-word`, `fib-thue-morse` or a DFAO file.
        source: String,
        c: usize,
        #[command(flatten)]
        output: Output,
    },
    /// i -> h(n i + c), 0 <= c < n
    Linear {
        source: String,
        n: u64,
        c: u64,
        #[command(flatten)]
        output: Output,
    },
    /// The morphism and coding read off the minimal DFAO.
    Morphism { source: String },
}

#[derive(Subcommand, Debug)]
enum SeqKind {
    /// Print the value at each index.
    Eval { source: String, indices: Vec<u64> },
}

#[derive(Subcommand, Debug)]
enum PipelineKind {
    /// n[x] + c = [z]
    Affine { n: u64, c: u64 },
    /// i -> h(n i + c)
    Subseq { source: String, n: u64, c: u64 },
}

#[derive(Subcommand, Debug)]
enum VerifyKind {
    /// Compare a construction (or a file) with arithmetic below a bound.
    Oracle {
        #[command(subcommand)]
        target: OracleTarget,
        #[arg(long, default_value_t = 2000, global = true)]
        bound: u64,
        /// Check this automaton file instead of the built one.
        #[arg(long, global = true)]
        file: Option<PathBuf>,
    },
    /// Reproduce a published table of state counts.
    Oeis {
        #[arg(value_parser = ["A372846", "A385021"])]
        id: String,
    },
    /// Sizes against a growth model, with the frozen ceiling.
    Growth {
        family: Family,
        #[arg(long, default_value_t = 10)]
        max: u64,
    },
}

#[derive(Subcommand, Debug, Clone)]
enum OracleTarget {
    AddConst { c: u64 },
    SubConst { c: u64 },
    Affine { n: u64, c: u64 },
    EqConst { c: u64 },
    Adder,
    FibWord,
    FibThueMorse,
    Shift { source: String, c: u64 },
    Linear { source: String, n: u64, c: u64 },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Family {
    /// add_const(2^j) against log
    AddConst,
    /// unminimized affine(n, 0) against n^2
    Affine,
    /// determinized linear subsequence of the Fibonacci word against n^4
    Linear,
    /// shift of the parity-of-ones sequence against c
    Shift,
}

/// Bad arguments discovered after parsing; exit code 2.
#[derive(Debug)]
struct Usage(String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn usage(e: Error) -> anyhow::Error {
    match e {
        Error::Parameter(_) | Error::Parse(_) | Error::InvalidWord(_) | Error::Arity { .. } => {
            Usage(e.to_string()).into()
        }
        other => other.into(),
    }
}

fn emit(text: &str, out: &Option<PathBuf>) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn write_dfa(d: &Dfa, o: &Output) -> Result<()> {
    let text = match o.format {
        Format::Text => d.to_text(),
        Format::Dot => to_dot(d),
    };
    if o.stats {
        eprintln!(
            "states={} transitions={}",
            d.num_states(),
            d.num_transitions()
        );
    }
    emit(&text, &o.out)
}

fn write_dfao(d: &Dfao, o: &Output) -> Result<()> {
    let text = match o.format {
        Format::Text => d.to_text(),
        Format::Dot => to_dot_dfao(d),
    };
    if o.stats {
        eprintln!(
            "states={} transitions={}",
            d.num_states(),
            d.num_transitions()
        );
    }
    emit(&text, &o.out)
}

fn read_automaton(path: &Path) -> Result<Automaton> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    from_text(&text).map_err(usage)
}

fn source(name: &str) -> Result<Dfao> {
    match name {
        "fib-word" => Ok(fib_word()),
        "fib-thue-morse" => Ok(fib_thue_morse()),
        path => match read_automaton(Path::new(path))? {
            Automaton::Dfao(d) => Ok(d),
            Automaton::Dfa(_) => Err(Usage(format!("{path} holds a DFA, not a DFAO")).into()),
        },
    }
}

/// The oracle for a named source; files have none.
fn source_sequence(name: &str) -> Result<Sequence> {
    match name {
        "fib-word" => Ok(Sequence::FibWord),
        "fib-thue-morse" => Ok(Sequence::FibThueMorse),
        other => Err(Usage(format!("no arithmetic oracle for {other}")).into()),
    }
}

fn build(kind: &BuildKind, minimize: bool) -> Result<Dfa> {
    let d = match *kind {
        BuildKind::AddConst { c } if !minimize => relations::add_const_unminimized(c).dfa,
        BuildKind::AddConst { c } => relations::add_const(c),
        BuildKind::SubConst { c } => relations::sub_const(c),
        BuildKind::Affine { n, c } if !minimize && c < n => {
            relations::affine_unminimized(n, c).map_err(usage)?.dfa
        }
        BuildKind::Affine { n, c } => relations::affine_any(n, c).map_err(usage)?,
        BuildKind::EqConst { c } => relations::eq_const(c),
        BuildKind::Adder if !minimize => {
            let (lo, hi) = zeckendorf_automata::constants::ADDER_INTERVAL;
            relations::adder_with_interval(lo, hi).dfa
        }
        BuildKind::Adder => relations::adder(),
    };
    Ok(d)
}

fn write_report(report: &BuildReport, path: &Option<PathBuf>) -> Result<()> {
    if let Some(path) = path {
        fs::write(path, report.to_string())
            .with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(())
}

fn verify_oracle(target: &OracleTarget, bound: u64, file: &Option<PathBuf>) -> Result<bool> {
    let (built, spec) = match target.clone() {
        OracleTarget::AddConst { c } => (
            Automaton::Dfa(relations::add_const(c)),
            OracleSpec::relation(Relation::AddConst(c), bound),
        ),
        OracleTarget::SubConst { c } => (
            Automaton::Dfa(relations::sub_const(c)),
            OracleSpec::relation(Relation::SubConst(c), bound),
        ),
        OracleTarget::Affine { n, c } => (
            Automaton::Dfa(relations::affine_any(n, c).map_err(usage)?),
            OracleSpec::relation(Relation::Affine(n, c), bound),
        ),
        OracleTarget::EqConst { c } => (
            Automaton::Dfa(relations::eq_const(c)),
            OracleSpec::relation(Relation::EqConst(c), bound),
        ),
        OracleTarget::Adder => (
            Automaton::Dfa(relations::adder()),
            OracleSpec::relation(Relation::Adder, bound),
        ),
        OracleTarget::FibWord => (
            Automaton::Dfao(fib_word()),
            OracleSpec::sequence(Sequence::FibWord, bound),
        ),
        OracleTarget::FibThueMorse => (
            Automaton::Dfao(fib_thue_morse()),
            OracleSpec::sequence(Sequence::FibThueMorse, bound),
        ),
        OracleTarget::Shift { source: s, c } => {
            let seq = Sequence::Shift(Box::new(source_sequence(&s)?), c);
            (
                Automaton::Dfao(shift(&source(&s)?, c as usize).map_err(usage)?),
                OracleSpec::sequence(seq, bound),
            )
        }
        OracleTarget::Linear { source: s, n, c } => {
            let seq = Sequence::Linear(Box::new(source_sequence(&s)?), n, c);
            (
                Automaton::Dfao(linear_subseq(&source(&s)?, n, c).map_err(usage)?),
                OracleSpec::sequence(seq, bound),
            )
        }
    };
    let automaton = match file {
        Some(path) => read_automaton(path)?,
        None => built,
    };
    let report = oracle_check(&automaton, &spec).map_err(usage)?;
    println!("{report}");
    Ok(report.passed())
}

fn verify_growth(family: Family, max: u64) -> Result<bool> {
    let (report, ceiling) = match family {
        Family::AddConst => {
            let params: Vec<u64> = (1..=max).collect();
            let r = growth_probe(&params, SizeModel::Linear, |j| {
                Ok(relations::add_const(1 << j).num_states())
            })
            .map_err(usage)?;
            (r, ADD_CONST_PER_BIT)
        }
        Family::Affine => {
            let params: Vec<u64> = (1..=max).collect();
            let r = growth_probe(&params, SizeModel::Quadratic, |n| {
                Ok(relations::affine_unminimized(n, 0)?.dfa.num_states())
            })
            .map_err(usage)?;
            (r, AFFINE_PER_N_SQUARED)
        }
        Family::Linear => {
            let params: Vec<u64> = (1..=max).collect();
            // the Fibonacci word has 2 states
            let r = growth_probe(&params, SizeModel::Quartic, |n| {
                Ok(linear_subseq_build(&fib_word(), n, 0)?
                    .determinized
                    .automaton
                    .num_states()
                    / 4)
            })
            .map_err(usage)?;
            (r, LINEAR_PER_M2_N4)
        }
        Family::Shift => {
            let params: Vec<u64> = (1..=max).collect();
            let r = growth_probe(&params, SizeModel::Linear, |c| {
                Ok(shift(&fib_thue_morse(), c as usize)?.num_states())
            })
            .map_err(usage)?;
            (r, SHIFT_PER_OFFSET)
        }
    };
    print!("{report}");
    println!("ceiling={ceiling}");
    Ok(report.max_ratio() <= ceiling)
}

/// `Ok(false)` means a verification failed.
fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Encode { n } => {
            let w = encode(n);
            println!(
                "{}",
                if w.is_empty() {
                    "0".to_string()
                } else {
                    w.to_string()
                }
            );
        }
        Command::Decode { word } => {
            let w: ZeckWord = word.parse().map_err(usage)?;
            if !w.is_valid() {
                bail!(Usage(format!("{word} contains two adjacent 1s")));
            }
            println!("{}", w.value());
        }
        Command::Build { relation, config } => {
            let d = build(&relation, !config.no_minimize)?;
            write_dfa(&d, &config.output)?;
        }
        Command::Subseq { kind } => match kind {
            SubseqKind::Shift {
                source: s,
                c,
                output,
            } => write_dfao(&shift(&source(&s)?, c).map_err(usage)?, &output)?,
            SubseqKind::Linear {
                source: s,
                n,
                c,
                output,
            } => write_dfao(&linear_subseq(&source(&s)?, n, c).map_err(usage)?, &output)?,
            SubseqKind::Morphism { source: s } => {
                let m = source(&s)?.minimize();
                print!("{}", to_morphism(&m)?);
            }
        },
        Command::Seq {
            kind: SeqKind::Eval { source: s, indices },
        } => {
            let m = source(&s)?;
            for i in indices {
                println!("{i} {}", m.eval(i).map_err(usage)?);
            }
        }
        Command::Pipeline {
            kind,
            report,
            output,
        } => match kind {
            PipelineKind::Affine { n, c } => {
                let (d, r) = affine_pipeline(n, c).map_err(usage)?;
                write_report(&r, &report)?;
                write_dfa(&d, &output)?;
            }
            PipelineKind::Subseq { source: s, n, c } => {
                let (d, r) = subseq_pipeline(&source(&s)?, n, c).map_err(usage)?;
                write_report(&r, &report)?;
                write_dfao(&d, &output)?;
            }
        },
        Command::Verify { kind } => {
            return match kind {
                VerifyKind::Oracle {
                    target,
                    bound,
                    file,
                } => verify_oracle(&target, bound, &file),
                VerifyKind::Oeis { id } => {
                    let table = if id == "A372846" {
                        oeis_a372846()?
                    } else {
                        oeis_a385021()?
                    };
                    print!("{table}");
                    Ok(table.matches())
                }
                VerifyKind::Growth { family, max } => verify_growth(family, max),
            };
        }
        Command::Export { file, output } => match read_automaton(&file)? {
            Automaton::Dfa(d) => write_dfa(&d.canonical(), &output)?,
            Automaton::Dfao(d) => write_dfao(&d.canonical(), &output)?,
        },
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<Usage>().is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
