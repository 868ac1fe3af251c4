//! `liouville-lab`: command-line front end for the certificate library.

mod input;
mod report;

use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use liouville_lab::formfam::cutoff::cutoff_check;
use liouville_lab::formfam::{
    contact_grid_check, grid_points, gt_form, lutz_family_check, min_c_search, sol_weak_filling_fixture, t3_form,
    ProfileTriple, ReebSolver, Smoothstep,
};
use liouville_lab::liealg::geiges::geiges_isomorphism;
use liouville_lab::liealg::{contact_check, geiges_pair_check, liouville_pair_check, preset, LiouvillePair, Verdict};
use liouville_lab::numfield::{hyperbolic_sl2_lattice, pipeline, Poly};
use liouville_lab::symplin::{
    cayley_roundtrip_suite, cocompatible_counterexample_suite, construct_cotamed, cotamed_exists, equivalence_suite,
    interpolation_suite, is_real_negative, pencil_spectrum, simultaneous_reduce, simultaneous_reduce_exact, tames,
    CONVENTION,
};
use liouville_lab::symplin::reduce::REAL_TOL;
use liouville_lab::{Error, Result};

use report::{Kind, Report};

#[derive(Parser)]
#[command(name = "liouville-lab", version, about = "Certificates for Liouville pairs, cotamed structures and lattices")]
struct Cli {
    /// Emit a JSON report on stdout.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for randomized suites.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Cap on worker threads.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Include wall-clock time (makes JSON output time-dependent).
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Psi {
    Quintic,
    Septic,
}

impl From<Psi> for Smoothstep {
    fn from(p: Psi) -> Self {
        match p {
            Psi::Quintic => Smoothstep::Quintic,
            Psi::Septic => Smoothstep::Septic,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Which {
    Plus,
    Minus,
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteName {
    Equivalence,
    Interpolation,
    Cayley,
    Counterexample,
    WeakFilling,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether two symplectic forms admit a common tamed J, and construct one.
    Cotame {
        /// Matrix of ω₀: JSON file, inline JSON, or rows like `0,1;-1,0`.
        #[arg(long, allow_hyphen_values = true)]
        omega0: String,
        #[arg(long, allow_hyphen_values = true)]
        omega1: String,
    },
    /// Simultaneous normal form of the pencil (ω₀, ω₁).
    PencilReduce {
        #[arg(long, allow_hyphen_values = true)]
        omega0: String,
        #[arg(long, allow_hyphen_values = true)]
        omega1: String,
        #[arg(long, default_value_t = 1e-3)]
        eps: f64,
        /// Exact reduction over ℚ (diagonalizable pencils with rational spectrum).
        #[arg(long)]
        exact: bool,
    },
    /// Exact Liouville-pair certificate for a preset pair.
    VerifyPair {
        #[arg(long)]
        preset: String,
    },
    /// Exact sign of α ∧ dα^n for one form of a preset pair.
    VerifyContact {
        #[arg(long)]
        preset: String,
        #[arg(long, value_enum, default_value = "plus")]
        form: Which,
    },
    /// Grid check that the Giroux torsion form is contact.
    GirouxTorsion {
        #[arg(long, default_value = "totreal:1")]
        preset: String,
        #[arg(long, default_value_t = 1)]
        k: u32,
        #[arg(long, default_value_t = 1024)]
        grid: usize,
        /// Use the T³ family cos(ks) dθ + sin(ks) dt instead of the preset.
        #[arg(long)]
        t3: bool,
    },
    /// Reeb field of the Giroux torsion form over a grid.
    Reeb {
        #[arg(long, default_value = "totreal:1")]
        preset: String,
        #[arg(long, default_value_t = 1)]
        k: u32,
        #[arg(long, default_value_t = 1024)]
        grid: usize,
        #[arg(long)]
        t3: bool,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
    /// Lutz-family volume identity.
    LutzCheck {
        #[arg(long, default_value = "sol:2,1,1,1")]
        preset: String,
        #[arg(long, default_value_t = 1)]
        k: u32,
        #[arg(long, default_value_t = 0.0)]
        tau: f64,
        #[arg(long, value_enum, default_value = "quintic")]
        psi: Psi,
        #[arg(long, default_value_t = 512)]
        grid: usize,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
    /// Positivity of the cut-off Liouville form; searches the smallest c unless `--c` is given.
    Cutoff {
        #[arg(long, default_value = "sol:2,1,1,1")]
        preset: String,
        #[arg(long, value_enum, default_value = "quintic")]
        psi: Psi,
        #[arg(long, default_value_t = 256)]
        grid: usize,
        #[arg(long)]
        c: Option<f64>,
    },
    /// Units, log lattice and monodromy of ℤ[X]/(f).
    Numfield {
        /// Coefficients in ascending order, e.g. `-2,0,1` for X² − 2.
        #[arg(long, allow_hyphen_values = true)]
        poly: Option<String>,
        /// Print the monodromy matrices.
        #[arg(long)]
        monodromy: bool,
        /// Box bound for the unit search.
        #[arg(long = "box")]
        box_bound: Option<i64>,
        /// Hyperbolic SL(2,ℤ) matrix `a,b,c,d` instead of a polynomial.
        #[arg(long, allow_hyphen_values = true, conflicts_with = "poly")]
        sl2: Option<String>,
    },
    /// Geiges-pair check for a preset, or the isomorphism G_{2n−1} → 𝒢^{r,s}_1.
    Geiges {
        #[arg(long, conflicts_with = "n")]
        preset: Option<String>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    /// Randomized and fixture suites.
    Suite {
        #[arg(long, value_enum)]
        name: SuiteName,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        /// Dimensions for the equivalence suite.
        #[arg(long, default_value = "4,6,8,10")]
        dims: String,
        /// Dimension for the Cayley and interpolation suites.
        #[arg(long, default_value_t = 6)]
        dim: usize,
        /// ε for the weak-filling fixture.
        #[arg(long, default_value_t = 1e-3)]
        eps: f64,
        #[arg(long, default_value_t = 128)]
        grid: usize,
    },
}

fn pair_of(id: &str) -> Result<LiouvillePair> {
    LiouvillePair::from_preset(id)
}

fn triple(preset_id: &str, k: u32, t3: bool) -> Result<ProfileTriple> {
    if t3 {
        t3_form(k)
    } else {
        gt_form(&pair_of(preset_id)?, k)
    }
}

fn cotame(omega0: &str, omega1: &str) -> Result<Report> {
    let (q0, q1) = (input::read_skew(omega0)?, input::read_skew(omega1)?);
    let (a0, a1) = (q0.to_f64(), q1.to_f64());
    if !q0.is_nondegenerate()? || !q1.is_nondegenerate()? {
        return Err(Error::Degenerate);
    }
    let inputs = json!({"omega0": q0.to_json(), "omega1": q1.to_json()});
    let tol = json!({"real_negative_rel": REAL_TOL});
    let r = Report::new("cotame", "symplin.construct_cotamed", inputs, Kind::Numeric)
        .tolerances(tol)
        .orientation(json!(CONVENTION));
    if !cotamed_exists(&a0, &a1)? {
        let bad: Vec<_> =
            pencil_spectrum(&a0, &a1)?.into_iter().filter(|z| is_real_negative(*z)).map(|z| z.re).collect();
        return Ok(r
            .verdict("not-cotamable", false)
            .result(json!({"exists": false, "negative_eigenvalues": bad}))
            .line(format!("B = ω₀⁻¹ω₁ has eigenvalues on the negative real axis: {bad:?}")));
    }
    let c = construct_cotamed(&a0, &a1)?;
    let ok = tames(&a0, &c.j)? && tames(&a1, &c.j)?;
    let mut lines = vec![format!("margins: ω₀ {:.3e}, ω₁ {:.3e}", c.margin0, c.margin1), "J =".to_string()];
    for row in c.j.matrix() {
        lines.push(format!("  {}", row.iter().map(|x| format!("{:>10.6}", x + 0.0)).collect::<Vec<_>>().join(" ")));
    }
    let mut r = r.verdict(if ok { "cotamed" } else { "construction-failed" }, ok).result(c.to_json());
    for l in lines {
        r = r.line(l);
    }
    Ok(r)
}

fn pencil_reduce(omega0: &str, omega1: &str, eps: f64, exact: bool) -> Result<Report> {
    let (q0, q1) = (input::read_skew(omega0)?, input::read_skew(omega1)?);
    let inputs = json!({"omega0": q0.to_json(), "omega1": q1.to_json(), "eps": eps, "exact": exact});
    if exact {
        let b = simultaneous_reduce_exact(&q0, &q1)?;
        let ok = b.verify(&q0, &q1);
        let lambdas: Vec<String> = b.lambdas.iter().map(|l| l.to_string()).collect();
        return Ok(Report::new("pencil-reduce", "symplin.simultaneous_reduce_exact", inputs, Kind::Exact)
            .verdict(if ok { "reduced" } else { "verification-failed" }, ok)
            .orientation(json!(CONVENTION))
            .result(json!({"lambdas": lambdas, "basis": b.basis.iter().map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>()}))
            .line(format!("λ per symplectic pair: {}", lambdas.join(", "))));
    }
    let b = simultaneous_reduce(&q0.to_f64(), &q1.to_f64(), eps)?;
    let ok = b.residual0 <= 1e-9 && b.residual1 <= 10.0 * eps;
    let mut r = Report::new("pencil-reduce", "symplin.simultaneous_reduce", inputs, Kind::Numeric)
        .verdict(if ok { "reduced" } else { "residual-too-large" }, ok)
        .tolerances(json!({"eps": eps, "residual0": 1e-9, "residual1": 10.0 * eps}))
        .orientation(json!(CONVENTION))
        .result(b.to_json())
        .line(format!("residuals: ω₀ {:.2e}, ω₁ {:.2e}", b.residual0, b.residual1));
    for blk in &b.blocks {
        r = r.line(blk.to_json().to_string());
    }
    Ok(r)
}

fn verify_pair(id: &str) -> Result<Report> {
    let p = pair_of(id)?;
    let cert = liouville_pair_check(&p.algebra, &p.plus, &p.minus)?;
    let plus = contact_check(&p.algebra, &p.plus)?;
    let minus = contact_check(&p.algebra, &p.minus)?;
    let ok = cert.is_positive() && cert.replay();
    Ok(Report::new("verify-pair", "liealg.liouville_pair_check", json!({"preset": id}), Kind::Exact)
        .verdict(cert.verdict.as_str(), ok)
        .tolerances(json!({"root_isolation_width": "1/1048576"}))
        .orientation(json!(cert.orientation))
        .result(json!({
            "certificate": cert.to_json(),
            "alpha_plus": plus.to_json(),
            "alpha_minus": minus.to_json(),
        }))
        .line(format!("α₊ = {}  ({})", p.plus, plus.verdict.as_str()))
        .line(format!("α₋ = {}  ({})", p.minus, minus.verdict.as_str()))
        .line(format!("Liouville polynomial on [0, 1]: {}", cert.verdict.as_str())))
}

fn verify_contact(id: &str, which: Which) -> Result<Report> {
    let p = pair_of(id)?;
    let (name, a) = match which {
        Which::Plus => ("plus", &p.plus),
        Which::Minus => ("minus", &p.minus),
    };
    let c = contact_check(&p.algebra, a)?;
    Ok(Report::new("verify-contact", "liealg.contact_check", json!({"preset": id, "form": name}), Kind::Exact)
        .verdict(c.verdict.as_str(), c.verdict != Verdict::Indefinite)
        .tolerances(json!({}))
        .orientation(json!(c.orientation))
        .result(c.to_json())
        .line(format!("α = {a}"))
        .line(format!("top(α ∧ dα^n) sign: {}", c.verdict.as_str())))
}

fn giroux(id: &str, k: u32, grid: usize, t3: bool) -> Result<Report> {
    let t = triple(id, k, t3)?;
    let c = contact_grid_check(&t.lambda(), t.interval, grid)?;
    let inputs = json!({"preset": if t3 { "t3" } else { id }, "k": k, "grid": grid});
    Ok(Report::new("giroux-torsion", "formfam.contact_grid_check", inputs, Kind::Grid)
        .verdict(if c.pass { "positive" } else { "not-positive" }, c.pass)
        .tolerances(json!({"min_top_coefficient": "> 0"}))
        .orientation(json!(t.orientation()))
        .result(json!({"grid": c.to_json(), "interval": [t.interval.0, t.interval.1], "warnings": t.warnings}))
        .line(format!("{} samples on [{}, {:.6}], min {:.6e} at s = {:?}", c.samples, t.interval.0, t.interval.1, c.min, c.argmin)))
}

fn reeb(id: &str, k: u32, grid: usize, t3: bool, tol: f64) -> Result<Report> {
    let t = triple(id, k, t3)?;
    let solver = ReebSolver::new(&t);
    let (mut r1, mut r2) = (0.0f64, 0.0f64);
    let mut failures = Vec::new();
    let pts = grid_points(t.interval.0, t.interval.1, grid, true);
    for &s in &pts {
        match solver.solve(s, tol) {
            Ok(r) => {
                r1 = r1.max(r.r1);
                r2 = r2.max(r.r2);
            }
            Err(e) => failures.push(json!({"s": s, "error": e.to_string()})),
        }
    }
    let ok = failures.is_empty();
    let inputs = json!({"preset": if t3 { "t3" } else { id }, "k": k, "grid": grid});
    Ok(Report::new("reeb", "formfam.reeb_field", inputs, Kind::Grid)
        .verdict(if ok { "solved" } else { "residual-too-large" }, ok)
        .tolerances(json!({"r1": tol, "r2": tol}))
        .orientation(json!(t.orientation()))
        .result(json!({"samples": pts.len(), "max_r1": r1, "max_r2": r2, "failures": failures}))
        .line(format!("{} points, max |λ(R)−1| {r1:.2e}, max |ι_R dλ| {r2:.2e}", pts.len()))
        .line(format!("{} failures", failures.len())))
}

fn lutz(id: &str, k: u32, tau: f64, psi: Psi, grid: usize, tol: f64) -> Result<Report> {
    let p = pair_of(id)?;
    let r = lutz_family_check(&p, k, tau, psi.into(), grid)?;
    let ok = r.max_rel_error <= tol;
    let inputs = json!({"preset": id, "k": k, "tau": tau, "psi": Smoothstep::from(psi).name(), "grid": grid});
    Ok(Report::new("lutz-check", "formfam.lutz_family_check", inputs, Kind::Grid)
        .verdict(if ok { "identity-holds" } else { "identity-fails" }, ok)
        .tolerances(json!({"rel_error": tol}))
        .orientation(json!(["ds", "dt"].iter().map(|s| s.to_string()).chain(p.algebra.names().iter().cloned()).collect::<Vec<_>>()))
        .result(r.to_json())
        .line(format!("max relative error {:.2e} over {} samples", r.max_rel_error, r.samples)))
}

fn cutoff(id: &str, psi: Psi, grid: usize, c: Option<f64>) -> Result<Report> {
    let p = pair_of(id)?;
    let psi_s = Smoothstep::from(psi);
    let inputs = json!({"preset": id, "psi": psi_s.name(), "grid": grid, "c": c});
    let r = Report::new("cutoff", "formfam.min_c_search", inputs, Kind::Grid)
        .tolerances(json!({"bisection": 1e-3, "refinement": 4}))
        .orientation(json!(std::iter::once("ds".to_string()).chain(p.algebra.names().iter().cloned()).collect::<Vec<_>>()));
    match c {
        Some(c) => {
            let g = cutoff_check(&p, c, psi_s, grid)?;
            Ok(Report { operation: "formfam.cutoff_check", ..r }
                .verdict(if g.pass { "positive" } else { "not-positive" }, g.pass)
                .result(g.to_json())
                .line(format!("c = {c}: min {:.3e} at {:?}", g.min, g.argmin)))
        }
        None => match min_c_search(&p, psi_s, grid) {
            Ok(s) => Ok(r
                .verdict(if s.pass() { "positive" } else { "not-positive" }, s.pass())
                .result(s.to_json())
                .line(format!("c* = {:.4e}, refined min {:.3e}", s.c_star, s.refined.min))),
            Err(Error::SearchExhausted(msg)) => Ok(r
                .verdict("no-cutoff", false)
                .result(json!({"error": msg}))
                .line(msg)),
            Err(e) => Err(e),
        },
    }
}

fn numfield(poly: Option<&str>, monodromy: bool, box_bound: Option<i64>, sl2: Option<&str>) -> Result<Report> {
    if let Some(s) = sl2 {
        let a = input::read_sl2(s)?;
        let h = hyperbolic_sl2_lattice(a)?;
        let ok = h.residual <= 1e-9 * (1.0 + a.iter().flatten().map(|x| x.abs()).max().unwrap_or(0) as f64);
        return Ok(Report::new("numfield", "numfield.hyperbolic_sl2_lattice", json!({"sl2": a}), Kind::Numeric)
            .verdict(if ok { "hyperbolic" } else { "residual-too-large" }, ok)
            .tolerances(json!({"residual": 1e-9}))
            .result(h.to_json())
            .line(format!("τ = {:.12}", h.tau)));
    }
    let poly = poly.ok_or_else(|| Error::Precondition("numfield needs --poly or --sl2".into()))?;
    let p = pipeline(Poly::parse(poly)?, box_bound)?;
    let pair_ok = p.pair.as_ref().is_none_or(|r| r.pass());
    let ok = pair_ok && p.lattice.trace_defect <= 1e-10 && p.lattice.diagonalization_defect <= 1e-8;
    let kind = if p.pair.is_some() { Kind::Exact } else { Kind::Numeric };
    let (r, s) = p.field.signature();
    let mut rep = Report::new("numfield", "numfield.pipeline", json!({"poly": p.field.poly.coeffs(), "box": p.units.box_bound}), kind)
        .verdict(if ok { "lattice" } else { "check-failed" }, ok)
        .tolerances(json!({"torsion": 1e-9, "trace": 1e-10, "eigen_relation": 1e-8}))
        .orientation(json!(format!("power basis 1, X, …, X^{}", p.field.degree() - 1)))
        .result(p.to_json())
        .line(format!("signature ({r}, {s}), unit rank {}, torsion order {}", p.units.rank, p.units.torsion_order))
        .line(format!("positive units: {:?}", p.positive_units.iter().map(|u| &u.0).collect::<Vec<_>>()));
    if monodromy {
        for m in &p.lattice.monodromy {
            rep = rep.line(format!("monodromy {m:?}"));
        }
    }
    if let Some(pr) = &p.pair {
        rep = rep.line(format!("Liouville pair {}: {}", pr.preset, pr.certificate.verdict.as_str()));
    }
    Ok(rep)
}

fn geiges(preset_id: Option<&str>, n: Option<usize>, tol: f64) -> Result<Report> {
    if let Some(n) = n {
        let iso = geiges_isomorphism(n)?;
        let ok = iso.passes(tol);
        return Ok(Report::new("geiges", "liealg.geiges_isomorphism", json!({"n": n}), Kind::Numeric)
            .verdict(if ok { "isomorphic" } else { "residual-too-large" }, ok)
            .tolerances(json!({"residual": tol}))
            .result(iso.to_json())
            .line(format!("traces {:?}, residual {:.2e}, rank {}", iso.traces, iso.residual, iso.rank)));
    }
    let id = preset_id.unwrap_or("geiges:3");
    let pr = preset(id)?;
    let p = pr.liouville_pair()?;
    let g = geiges_pair_check(&p.algebra, &p.plus, &p.minus)?;
    Ok(Report::new("geiges", "liealg.geiges_pair_check", json!({"preset": id}), Kind::Exact)
        .verdict(if g.is_geiges { "geiges-pair" } else { "not-geiges" }, g.is_geiges)
        .orientation(json!(pr.orientation()))
        .result(g.to_json())
        .line(format!("volumes {} / {}", g.volumes.0, g.volumes.1)))
}

#[allow(clippy::too_many_arguments)]
fn suite(name: SuiteName, trials: usize, dims: &str, dim: usize, eps: f64, grid: usize, seed: u64) -> Result<Report> {
    match name {
        SuiteName::Equivalence => {
            let d = input::read_list(dims)?;
            let r = equivalence_suite(&d, trials, seed)?;
            let ok = r.mismatches == 0 && r.sign_law_violations == 0;
            Ok(Report::new("suite", "symplin.equivalence_suite", json!({"name": "equivalence", "dims": d, "trials": trials}), Kind::Randomized)
                .verdict(if ok { "no-mismatch" } else { "mismatch" }, ok)
                .tolerances(json!({"real_negative_rel": REAL_TOL, "segment_samples": 10000}))
                .orientation(json!(CONVENTION))
                .result(r.to_json())
                .line(format!("{} trials, {} mismatches", r.trials, r.mismatches)))
        }
        SuiteName::Interpolation => {
            let r = interpolation_suite(dim, trials, seed)?;
            let ok = r.failures == 0;
            Ok(Report::new("suite", "symplin.interpolation_suite", json!({"name": "interpolation", "dim": dim, "trials": trials}), Kind::Randomized)
                .verdict(if ok { "tamed" } else { "taming-lost" }, ok)
                .orientation(json!(CONVENTION))
                .result(r.to_json())
                .line(format!("{}/{} interpolants tamed", r.checks - r.failures, r.checks)))
        }
        SuiteName::Cayley => {
            let r = cayley_roundtrip_suite(dim, trials, seed)?;
            let ok = r.max_roundtrip <= 1e-10 && r.domain_failures == 0;
            Ok(Report::new("suite", "symplin.cayley_map", json!({"name": "cayley", "dim": dim, "trials": trials}), Kind::Randomized)
                .verdict(if ok { "round-trip" } else { "round-trip-error" }, ok)
                .tolerances(json!({"roundtrip": 1e-10}))
                .orientation(json!(CONVENTION))
                .result(r.to_json())
                .line(format!("max round-trip error {:.2e}", r.max_roundtrip)))
        }
        SuiteName::Counterexample => {
            let r = cocompatible_counterexample_suite(trials, seed)?;
            let ok = r.wedge_zero && r.survivors == 0;
            Ok(Report::new("suite", "symplin.cocompatible_counterexample_suite", json!({"name": "counterexample", "trials": trials}), Kind::Randomized)
                .verdict(if ok { "no-cocompatible" } else { "survivor" }, ok)
                .orientation(json!(CONVENTION))
                .result(r.to_json())
                .line(format!("{} ω₀-compatible J, {} tamed by ω₁", r.trials, r.survivors)))
        }
        SuiteName::WeakFilling => {
            let r = sol_weak_filling_fixture(eps, grid)?;
            Ok(Report::new("suite", "formfam.sol_weak_filling_fixture", json!({"name": "weak-filling", "eps": eps, "grid": grid}), Kind::Grid)
                .verdict(if r.pass() { "weak-filling" } else { "fails" }, r.pass())
                .orientation(json!(r.volume.orientation))
                .result(r.to_json())
                .line(format!("exact ω∧dα± = 0: {}, volume min {:.3e}", r.exact_zero, r.volume.min)))
        }
    }
}

fn run(cli: &Cli) -> Result<Report> {
    match &cli.command {
        Command::Cotame { omega0, omega1 } => cotame(omega0, omega1),
        Command::PencilReduce { omega0, omega1, eps, exact } => pencil_reduce(omega0, omega1, *eps, *exact),
        Command::VerifyPair { preset } => verify_pair(preset),
        Command::VerifyContact { preset, form } => verify_contact(preset, *form),
        Command::GirouxTorsion { preset, k, grid, t3 } => giroux(preset, *k, *grid, *t3),
        Command::Reeb { preset, k, grid, t3, tol } => reeb(preset, *k, *grid, *t3, *tol),
        Command::LutzCheck { preset, k, tau, psi, grid, tol } => lutz(preset, *k, *tau, *psi, *grid, *tol),
        Command::Cutoff { preset, psi, grid, c } => cutoff(preset, *psi, *grid, *c),
        Command::Numfield { poly, monodromy, box_bound, sl2 } => {
            numfield(poly.as_deref(), *monodromy, *box_bound, sl2.as_deref())
        }
        Command::Geiges { preset, n, tol } => geiges(preset.as_deref(), *n, *tol),
        Command::Suite { name, trials, dims, dim, eps, grid } => suite(*name, *trials, dims, *dim, *eps, *grid, cli.seed),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: thread pool: {e}");
            return ExitCode::from(2);
        }
    }
    let start = Instant::now();
    let report = match run(&cli) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let timing = cli.timing.then(|| start.elapsed().as_secs_f64());
    if cli.json {
        let v = report.to_json(cli.seed, timing);
        println!("{}", serde_json::to_string_pretty(&v).expect("serializable"));
    } else {
        print!("{}", report.human(timing));
    }
    ExitCode::from(if report.pass { 0 } else { 1 })
}
