use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::json;

use xcomm::abelian::abelianization;
use xcomm::certify::{first_difference, verify_certificate, Basis, CertError, Certificate, Deriver};
use xcomm::homs::{in_d, in_l, in_q, in_w, rho};
use xcomm::lomodule::{nu, quotient_normal_form, reduce_word};
use xcomm::presentations::{v, x_presentation_free_with, x_presentation_of_with, Format, Presentation, Schedule};
use xcomm::quotients::{closure_order, verify_quotient, Assignment, DEFAULT_BOUND};
use xcomm::words::{box_base, Alphabet, BoxForm, Word};

/// Presentations, relator certificates and invariants of weak
/// commutativity groups.
#[derive(Parser)]
#[command(name = "xcomm", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the presentation of X(F_m), or of X(G) for a given G.
    Present {
        #[arg(long, required_unless_present = "input", conflicts_with = "input")]
        rank: Option<u32>,
        /// Presentation of G, as JSON or plain text.
        #[arg(long)]
        input: Option<PathBuf>,
        /// Use every word of the literal schedule instead of the reduced one.
        #[arg(long)]
        full: bool,
        #[arg(long, value_enum, default_value_t = OutFormat::Plain)]
        format: OutFormat,
    },
    /// Print the number of box relators needed at rank m.
    Count {
        #[arg(long)]
        rank: u32,
    },
    /// Derive box relators from the schedule.
    Certify {
        #[arg(long)]
        rank: u32,
        /// Base word; may be repeated.
        #[arg(long = "word", required = true)]
        words: Vec<String>,
        /// Write the certificate JSON here (an index is inserted before the
        /// extension when several words are given).
        #[arg(long)]
        emit: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Check a certificate file.
    Verify { cert: PathBuf },
    /// Evaluate rho: X(F_m) -> F_m^3.
    Rho {
        #[arg(long)]
        rank: u32,
        #[arg(long)]
        word: String,
        #[arg(long)]
        json: bool,
    },
    /// Test membership in L, D or W (exact for free groups).
    Member {
        #[arg(long, value_enum, ignore_case = true)]
        sub: Sub,
        #[arg(long)]
        rank: u32,
        #[arg(long)]
        word: String,
    },
    /// Evaluate nu: X(F_m) -> M x| F_m.
    Nu {
        #[arg(long)]
        rank: u32,
        #[arg(long)]
        word: String,
    },
    /// Arithmetic in ZF_m / I_2.
    Ring {
        #[command(subcommand)]
        op: RingOp,
    },
    /// Abelian invariants of a presented group.
    Abelianize {
        #[arg(long)]
        input: PathBuf,
        /// Abelianize X(G) instead of G.
        #[arg(long)]
        x: bool,
    },
    /// Check that generator images satisfy every relator.
    Quotient {
        #[arg(long)]
        pres: PathBuf,
        #[arg(long)]
        assign: PathBuf,
    },
}

#[derive(Subcommand)]
enum RingOp {
    /// Normal form of a group element.
    Reduce {
        #[arg(long)]
        rank: u32,
        #[arg(long)]
        word: String,
        /// Reduce further to canonical representatives in M.
        #[arg(long)]
        quotient: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum OutFormat {
    Plain,
    Gap,
    Magma,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Sub {
    L,
    D,
    W,
}

/// Failures, split by exit status.
enum Failure {
    Usage(String),
    Check(String),
}

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Failure {
        Failure::Usage(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check(msg)) => {
            eprintln!("xcomm: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("xcomm: {msg}");
            ExitCode::from(2)
        }
    }
}

fn parse(rank: u32, s: &str) -> Result<Word, Failure> {
    if rank == 0 {
        return Err(Failure::Usage("rank must be at least 1".into()));
    }
    Ok(Alphabet::standard(rank).parse(s)?)
}

fn read_presentation(path: &Path) -> Result<Presentation, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    if text.trim_start().starts_with('{') {
        Ok(Presentation::parse_json(&text)?)
    } else {
        Ok(Presentation::parse_plain(&text)?)
    }
}

fn show(w: &Word) -> String {
    Alphabet::standard(w.rank()).format(w)
}

fn run(command: Command) -> Outcome {
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    match command {
        Command::Present { rank, input, full, format } => {
            let schedule = if full { Schedule::Full } else { Schedule::Canonical };
            let p = match (rank, input) {
                (Some(m), _) => x_presentation_free_with(m, schedule)?,
                (None, Some(path)) => x_presentation_of_with(&read_presentation(&path)?, schedule)?,
                (None, None) => unreachable!("clap requires one of them"),
            };
            let format = match format {
                OutFormat::Plain => Format::Plain,
                OutFormat::Gap => Format::Gap,
                OutFormat::Magma => Format::Magma,
                OutFormat::Json => Format::Json,
            };
            writeln!(out, "{}", p.export(format)?)?;
        }
        Command::Count { rank } => writeln!(out, "{}", v(rank)?)?,
        Command::Certify { rank, words, emit, jobs } => certify(&mut out, rank, &words, emit.as_deref(), jobs)?,
        Command::Verify { cert } => verify(&mut out, &cert)?,
        Command::Rho { rank, word, json } => {
            let w = parse(rank, &word)?;
            let t = rho(&w);
            if json {
                let v = json!({"g1": show(&t.g1), "g2": show(&t.g2), "g3": show(&t.g3), "in_q": in_q(&t)});
                writeln!(out, "{v}")?;
            } else {
                writeln!(out, "({}, {}, {})", show(&t.g1), show(&t.g2), show(&t.g3))?;
            }
        }
        Command::Member { sub, rank, word } => {
            let w = parse(rank, &word)?;
            let yes = match sub {
                Sub::L => in_l(&w),
                Sub::D => in_d(&w),
                Sub::W => in_w(&w),
            };
            writeln!(out, "{yes}")?;
        }
        Command::Nu { rank, word } => {
            let x = nu(&parse(rank, &word)?)?;
            writeln!(out, "{}", x.to_json_value())?;
        }
        Command::Ring { op: RingOp::Reduce { rank, word, quotient } } => {
            let mut x = reduce_word(&parse(rank, &word)?)?;
            if quotient {
                x = quotient_normal_form(&x);
            }
            writeln!(out, "{}", x.to_json_value())?;
        }
        Command::Abelianize { input, x } => {
            let mut p = read_presentation(&input)?;
            if x {
                p = x_presentation_of_with(&p, Schedule::Canonical)?;
            }
            writeln!(out, "{}", abelianization(&p))?;
        }
        Command::Quotient { pres, assign } => {
            let p = read_presentation(&pres)?;
            let text = fs::read_to_string(&assign).map_err(|e| Failure::Usage(format!("{}: {e}", assign.display())))?;
            let asg = Assignment::parse_json(&text)?;
            if !verify_quotient(&p, &asg)? {
                let bad = p
                    .relators()
                    .iter()
                    .position(|r| {
                        !xcomm::quotients::eval_word_perm(r, p.alphabet(), &asg).is_ok_and(|x| x.is_identity())
                    })
                    .unwrap_or(0);
                return Err(Failure::Check(format!(
                    "relator {bad} ({}) is not satisfied",
                    p.alphabet().format_relator(&p.relators()[bad])
                )));
            }
            let gens: Vec<_> = p.generators().iter().filter_map(|g| asg.get(g).cloned()).collect();
            let order = closure_order(&gens, asg.degree(), DEFAULT_BOUND)?;
            writeln!(out, "ok: all {} relators hold; image order {order}", p.relators().len())?;
        }
    }
    out.flush()?;
    Ok(())
}

fn emit_path(base: &Path, i: usize, n: usize) -> PathBuf {
    if n == 1 {
        return base.to_path_buf();
    }
    let stem = base.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let name = match base.extension() {
        Some(ext) => format!("{stem}.{}.{}", i + 1, ext.to_string_lossy()),
        None => format!("{stem}.{}", i + 1),
    };
    base.with_file_name(name)
}

fn certify(out: &mut impl Write, rank: u32, words: &[String], emit: Option<&Path>, jobs: usize) -> Outcome {
    let parsed = words.iter().map(|s| parse(rank, s)).collect::<Result<Vec<_>, _>>()?;
    let deriver = Deriver::new(rank);
    let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs.max(1)).build()?;
    let results: Vec<Result<(Certificate, bool), CertError>> = pool.install(|| {
        parsed
            .par_iter()
            .map(|w| {
                let c = deriver.derive_box(w)?;
                let ok = verify_certificate(&c)?;
                Ok((c, ok))
            })
            .collect()
    });
    let mut failed = false;
    for (i, (w, r)) in parsed.iter().zip(results).enumerate() {
        let (c, ok) = r?;
        failed |= !ok;
        writeln!(out, "{}\t{} factors\t{}", show(w), c.len(), if ok { "verified" } else { "FAILED" })?;
        if let Some(base) = emit {
            let path = emit_path(base, i, parsed.len());
            let mut f = BufWriter::new(File::create(&path)?);
            c.write_json(&mut f)?;
            f.flush()?;
        }
    }
    if failed {
        return Err(Failure::Check("a derived certificate did not verify".into()));
    }
    Ok(())
}

fn verify(out: &mut impl Write, path: &Path) -> Outcome {
    let file = File::open(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    let c = Certificate::read_json(file)?;
    match verify_certificate(&c) {
        Ok(true) => {
            writeln!(out, "ok: {} factors reduce to the target", c.len())?;
            Ok(())
        }
        Err(e @ (CertError::Basis { .. } | CertError::Rank { .. })) => Err(Failure::Check(e.to_string())),
        Err(e) => Err(e.into()),
        Ok(false) => Err(Failure::Check(pinpoint(&c))),
    }
}

/// Locates a failure by comparing against a fresh derivation when the
/// target is a box relator.
fn pinpoint(c: &Certificate) -> String {
    let reference = match c.basis() {
        Basis::Upsilon { rank } => box_base(c.target(), BoxForm::Box)
            .and_then(|w| Deriver::new(rank).derive_box(&w).ok())
            .filter(|r| verify_certificate(r).unwrap_or(false)),
        Basis::BoxN { .. } => None,
    };
    match reference.and_then(|r| first_difference(c, &r)) {
        Some(i) => {
            format!("factor {i}: differs from the reference derivation; the product does not reduce to the target")
        }
        None => format!("the product of {} factors does not reduce to the target", c.len()),
    }
}
