use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use trialgebra::config::{Caps, SweepPolicy};
use trialgebra::error::{Error, Result};
use trialgebra::free_malcev::{engel_quotient_dims, free_malcev_dims, DimTable};
use trialgebra::graded_lie::example_4_algebra;
use trialgebra::io::{loop_file, read_input, to_canonical, Input};
use trialgebra::moufang::check_moufang;
use trialgebra::pipeline::{builtin_fleet, fleet_input, load_fleet_dir, verify_lemmas, FleetInput};
use trialgebra::report::Report;
use trialgebra::triality::{full_report, verify_triality};

#[derive(Parser)]
#[command(
    name = "trialgebra",
    version,
    about = "Groups with triality, Moufang loops and Malcev algebras over F_p"
)]
struct Cli {
    /// Print machine-readable JSON on stdout.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for sampled sweeps.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Verify the triality axioms of a group with two automorphisms.
    CheckTriality { file: PathBuf },
    /// Extract the Moufang loop and check its identities.
    ExtractLoop {
        file: PathBuf,
        /// Also write the loop file here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the filtration, Lie algebra, H and nilpotency checks.
    BurnsidePipeline {
        file: PathBuf,
        #[arg(long)]
        p: Option<u32>,
        #[arg(long)]
        n: Option<u32>,
    },
    /// Dimension tables of the free Malcev algebra and its Engel quotient.
    FreeMalcev {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        max_degree: usize,
        #[arg(long, requires = "engel_n")]
        engel_p: Option<u32>,
        #[arg(long, requires = "engel_p")]
        engel_n: Option<u32>,
        /// Field characteristic for the free table (defaults to the Engel p, else 5).
        #[arg(long)]
        p: Option<u32>,
    },
    /// Run every check on a fleet of inputs and compare with expected outcomes.
    VerifyLemmas {
        /// Use the built-in fleet (the default without --fleet).
        #[arg(long)]
        all: bool,
        #[arg(long)]
        fleet: Option<PathBuf>,
    },
}

struct Ctx {
    json: bool,
    caps: Caps,
    policy: SweepPolicy,
}

impl Ctx {
    fn emit<T: Serialize>(&self, value: &T, human: impl FnOnce() -> String) -> Result<()> {
        if self.json {
            print!("{}", to_canonical(value)?);
        } else {
            print!("{}", human());
        }
        Ok(())
    }
}

fn verdict(ok: bool) -> u8 {
    if ok {
        0
    } else {
        1
    }
}

fn render_report(title: &str, seed: u64, rep: &Report) -> String {
    let mut s = format!("{title} (seed {seed})\n");
    for c in &rep.checks {
        s.push_str(&format!("  {}\n", c.summary_line()));
    }
    s.push_str(if rep.all_passed() {
        "verdict: pass\n"
    } else {
        "verdict: FAIL\n"
    });
    s
}

fn check_triality(ctx: &Ctx, file: &Path) -> Result<u8> {
    let rep = match read_input(file)? {
        Input::Raw(r) => r.verify(),
        Input::Certified(t) => verify_triality(t.group(), t.rho(), t.sigma()),
        Input::Example { p, sigma_sign } => example_4_algebra(p, sigma_sign)?.report,
    };
    let seed = ctx.policy.seed;
    ctx.emit(&json!({"input": file, "seed": seed, "report": rep}), || {
        render_report(&format!("triality check of {}", file.display()), seed, &rep)
    })?;
    Ok(verdict(!rep.any_failed()))
}

fn certified(file: &Path) -> Result<trialgebra::triality::TrialityGroup> {
    match read_input(file)? {
        Input::Raw(r) => r.certify(),
        Input::Certified(t) => Ok(t),
        Input::Example { .. } => Err(Error::Format(
            "example_4 is a Lie algebra, not a group with triality".into(),
        )),
    }
}

fn extract_loop(ctx: &Ctx, file: &Path, out: Option<&Path>) -> Result<u8> {
    let t = certified(file)?;
    let (l, mut rep) = full_report(&t, &ctx.policy)?;
    rep.extend(check_moufang(&l.loop_, &ctx.policy));
    let lf = loop_file(&l.loop_);
    if let Some(out) = out {
        std::fs::write(out, to_canonical(&lf)?)?;
    }
    let seed = ctx.policy.seed;
    ctx.emit(
        &json!({"input": file, "seed": seed, "order": l.loop_.order(),
                "associative": l.loop_.is_associative(), "loop": lf, "report": rep}),
        || {
            let mut s = format!(
                "loop of order {} ({})\n",
                l.loop_.order(),
                if l.loop_.is_associative() {
                    "associative"
                } else {
                    "not associative"
                }
            );
            if out.is_none() {
                s.push_str(&to_canonical(&lf).unwrap_or_default());
            }
            s + &render_report("Moufang check", seed, &rep)
        },
    )?;
    Ok(verdict(!rep.any_failed()))
}

fn burnside_pipeline(ctx: &Ctx, file: &Path, p: Option<u32>, n: Option<u32>) -> Result<u8> {
    let name = file.display().to_string();
    let mut entry = fleet_input(&name, read_input(file)?)?;
    match &mut entry {
        FleetInput::Group { p: ep, n: en, .. } => {
            if let Some(p) = p {
                *ep = p;
            }
            if let Some(n) = n {
                *en = n;
            }
        }
        FleetInput::Example { p: ep, .. } => {
            if let Some(p) = p {
                *ep = p;
            }
        }
    }
    let rep = entry.run(&ctx.caps, &ctx.policy)?;
    let expected = entry.expected_failures();
    let mut failed: Vec<&str> = rep.report.failed_checks();
    failed.sort();
    let mut want = expected.clone();
    want.sort();
    let ok = failed == want;
    let seed = ctx.policy.seed;
    ctx.emit(
        &json!({"seed": seed, "pipeline": rep, "expected_failures": expected, "as_expected": ok}),
        || {
            let mut s = format!("seed {seed}\n{}", rep.render());
            if !expected.is_empty() {
                s.push_str(&format!("expected failures: {}\n", expected.join(", ")));
            }
            s.push_str(if ok {
                "verdict: as expected\n"
            } else {
                "verdict: FAIL\n"
            });
            s
        },
    )?;
    Ok(verdict(ok))
}

fn free_malcev(ctx: &Ctx, m: usize, d: usize, engel: Option<(u32, u32)>, p: Option<u32>) -> Result<u8> {
    let p = p.or(engel.map(|e| e.0)).unwrap_or(5);
    let free = free_malcev_dims(m, p, d, &ctx.caps)?;
    let quotient: Option<DimTable> = match engel {
        Some((ep, en)) => Some(engel_quotient_dims(m, ep, en, d, &ctx.caps)?),
        None => None,
    };
    let mut ok = free.dominates_witt();
    if let Some(q) = &quotient {
        ok &= q.bounded_by(&free);
    }
    ctx.emit(
        &json!({"free": free, "engel_quotient": quotient, "consistent": ok}),
        || {
            let mut s = format!("free Malcev algebra, m = {m}, over F_{p}\n{}", free.render());
            if let Some(q) = &quotient {
                s.push_str(&format!("Engel quotient\n{}", q.render()));
            }
            s
        },
    )?;
    Ok(verdict(ok))
}

fn verify(ctx: &Ctx, fleet: Option<&Path>) -> Result<u8> {
    let entries = match fleet {
        Some(dir) => load_fleet_dir(dir)?,
        None => builtin_fleet()?
            .into_iter()
            .map(|e| (e.name().to_string(), Ok(e)))
            .collect(),
    };
    if entries.is_empty() {
        eprintln!("no inputs");
        return Ok(1);
    }
    let table = verify_lemmas(entries, &ctx.caps, &ctx.policy);
    let seed = ctx.policy.seed;
    ctx.emit(
        &json!({"seed": seed, "rows": table.rows, "unexpected": table.unexpected}),
        || format!("seed {seed}\n{}", table.render()),
    )?;
    Ok(verdict(table.unexpected == 0))
}

fn run(cli: Cli) -> Result<u8> {
    let mut policy = SweepPolicy::from_env();
    if let Some(s) = cli.seed {
        policy.seed = s;
    }
    let ctx = Ctx {
        json: cli.json,
        caps: Caps::from_env(),
        policy,
    };
    match cli.command {
        Command::CheckTriality { file } => check_triality(&ctx, &file),
        Command::ExtractLoop { file, out } => extract_loop(&ctx, &file, out.as_deref()),
        Command::BurnsidePipeline { file, p, n } => burnside_pipeline(&ctx, &file, p, n),
        Command::FreeMalcev {
            m,
            max_degree,
            engel_p,
            engel_n,
            p,
        } => free_malcev(&ctx, m, max_degree, engel_p.zip(engel_n), p),
        Command::VerifyLemmas { all: _, fleet } => verify(&ctx, fleet.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
