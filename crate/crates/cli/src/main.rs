// Copyright (c) The skeinlab Contributors
// SPDX-License-Identifier: Apache-2.0

//! `skeinlab`: batch front end for tangle evaluation, skein products,
//! semiclassical brackets, fusion and the verification suites.
//!
//! Exit status: 0 on success, 1 when a verification suite finds defects,
//! 2 on malformed input or any other error.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};
use skeinlab_core::poisson::{embed_fused, sigma, FrDiagonal, SigmaMethod};
use skeinlab_core::skein::{mu, SkeinElement};
use skeinlab_core::surface::{FusionOrder, SurfacePattern};
use skeinlab_core::tangle::{rt_evaluate, TangleWord};
use skeinlab_core::verify::{first_order_backend, run_suite, Suite, VerifyConfig};
use skeinlab_core::{Backend, BackendKind, Error, RingMode};

#[derive(Parser, Debug)]
#[command(name = "skeinlab", version, about = "Exact skein algebras of marked surfaces over sl2 ribbon backends")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// Ribbon backend: classical, epsilon, quantum or drinfeld.
    #[arg(long, global = true, default_value = "quantum")]
    backend: String,
    /// Truncation order N (computations mod h^N) for quantum and drinfeld.
    #[arg(long, global = true, default_value_t = 3)]
    order: u8,
    /// Seed for random instances.
    #[arg(long, global = true, env = "SKEINLAB_SEED", default_value_t = 0)]
    seed: u64,
    /// Convention switch, currently `fusion=v1v2` or `fusion=v2v1`.
    #[arg(long, global = true, default_value = "fusion=v1v2")]
    convention: String,
    /// Whether the diagonal terms enter the ciliated-graph formula.
    #[arg(long = "fr-diagonal", global = true, default_value = "include")]
    fr_diagonal: String,
    /// Write the JSON result here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Report elapsed_ms as 0 so that identical runs give identical bytes.
    #[arg(long = "pin-clock", global = true, env = "SKEINLAB_PIN_CLOCK")]
    pin_clock: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate a tangle word and print its morphism.
    EvalTangle {
        /// Tangle word JSON.
        file: PathBuf,
    },
    /// Stacking product of two skein elements, the first one on top.
    Product {
        /// First factor.
        a: PathBuf,
        /// Second factor.
        b: PathBuf,
    },
    /// Semiclassical bracket of two classical skein elements.
    Sigma {
        /// algebraic, goldman or fock-rosly.
        #[arg(long, default_value = "algebraic")]
        method: String,
        /// First argument.
        a: PathBuf,
        /// Second argument.
        b: PathBuf,
    },
    /// Fuse two marked points of a surface pattern or of a skein element's pattern.
    Fuse {
        /// Surface pattern or skein element JSON.
        file: PathBuf,
        /// First vertex.
        #[arg(long, default_value_t = 0)]
        v1: usize,
        /// Second vertex.
        #[arg(long, default_value_t = 1)]
        v2: usize,
    },
    /// Run a verification suite and print its report.
    Verify {
        /// moves, ribbon, sigma, fusion, jacobi or torsion.
        #[arg(long)]
        suite: String,
    },
}

/// Failure with its exit status.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure { code: 2, message: e.to_string() }
    }
}

fn read_json(path: &Path) -> Result<Value, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure { code: 2, message: format!("{}: {e}", path.display()) })?;
    serde_json::from_str(&text).map_err(|e| Failure {
        code: 2,
        message: format!("{}:{}:{}: malformed JSON: {e}", path.display(), e.line(), e.column()),
    })
}

fn in_file<T>(path: &Path, r: skeinlab_core::Result<T>) -> Result<T, Failure> {
    r.map_err(|e| Failure { code: 2, message: format!("{}: {e}", path.display()) })
}

fn fusion_order(convention: &str) -> Result<FusionOrder, Failure> {
    let value = convention.strip_prefix("fusion=").ok_or_else(|| Failure {
        code: 2,
        message: format!("unknown convention {convention:?}; expected fusion=v1v2 or fusion=v2v1"),
    })?;
    Ok(FusionOrder::from_name(value)?)
}

fn element(path: &Path) -> Result<SkeinElement, Failure> {
    let v = read_json(path)?;
    in_file(path, SkeinElement::from_json(&v))
}

/// Bring an element to the backend's ring; classical inputs are lifted.
fn over(backend: &Backend, s: SkeinElement) -> Result<SkeinElement, Failure> {
    if s.mode() == backend.mode() {
        Ok(s)
    } else if s.mode() == RingMode::Classical {
        Ok(s.lift(backend)?)
    } else {
        Ok(s.convert(backend.mode())?)
    }
}

fn run(cli: &Cli) -> Result<(Value, u8), Failure> {
    let g = &cli.global;
    let kind = BackendKind::from_name(&g.backend)?;
    let backend = Backend::new(kind, Some(g.order))?;
    let fusion = fusion_order(&g.convention)?;
    let diagonal = FrDiagonal::from_name(&g.fr_diagonal)?;
    match &cli.command {
        Command::EvalTangle { file } => {
            let w = in_file(file, TangleWord::from_json(&read_json(file)?))?;
            Ok((rt_evaluate(&w, &backend)?.to_json(), 0))
        }
        Command::Product { a, b } => {
            let (x, y) = (over(&backend, element(a)?)?, over(&backend, element(b)?)?);
            Ok((mu(&backend, &x, &y)?.to_json(), 0))
        }
        Command::Sigma { method, a, b } => {
            let method = SigmaMethod::from_name(method)?;
            let fb = first_order_backend(&backend);
            let r = sigma(method, &fb, &element(a)?, &element(b)?, diagonal)?;
            Ok((json!({"method": r.method.name(), "element": r.element.to_json()}), 0))
        }
        Command::Fuse { file, v1, v2 } => {
            let v = read_json(file)?;
            if v.get("terms").is_some() {
                let s = in_file(file, SkeinElement::from_json(&v))?;
                let f = s.pattern().fuse(*v1, *v2, fusion)?;
                let fused = embed_fused(&s, &f)?;
                Ok((json!({"pattern": f.pattern.to_json(), "vertex_map": f.vertex_map, "merged": f.merged, "element": fused.to_json()}), 0))
            } else {
                let p = in_file(file, SurfacePattern::from_json(&v))?;
                let f = p.fuse(*v1, *v2, fusion)?;
                Ok((json!({"pattern": f.pattern.to_json(), "vertex_map": f.vertex_map, "merged": f.merged}), 0))
            }
        }
        Command::Verify { suite } => {
            let cfg = VerifyConfig {
                backend: kind,
                order: Some(g.order),
                seed: g.seed,
                fusion,
                fr_diagonal: diagonal,
                pin_clock: g.pin_clock,
            };
            let report = run_suite(Suite::from_name(suite)?, &cfg)?;
            let code = u8::from(!report.defects.is_empty());
            Ok((serde_json::to_value(&report).expect("report serializes"), code))
        }
    }
}

fn emit(out: Option<&Path>, v: &Value) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(v).expect("value serializes") + "\n";
    match out {
        Some(p) => fs::write(p, text).map_err(|e| Failure { code: 2, message: format!("{}: {e}", p.display()) }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(&cli).and_then(|(v, code)| emit(cli.global.out.as_deref(), &v).map(|()| code));
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("skeinlab: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
