//! `holotorsion` — exact verification and numeric labs from one binary.
//!
//! Every subcommand prints a deterministic JSON report (sorted keys,
//! floats rounded to 12 significant digits): exit 0 on success, 1 on a
//! domain error (with a JSON error payload), 2 on a usage error.

mod inputs;
mod report;

use clap::{Args, Parser, Subcommand};

use holotorsion_core::{curvature, hervella, structures};
use holotorsion_labs::{geodesic, surface, volume};
use report::{scalar_value, sig12, Report};

#[derive(Parser)]
#[command(name = "holotorsion", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact verification of the canonical-form results.
    Verify {
        #[command(subcommand)]
        what: VerifyWhat,
    },
    /// Betti numbers of the invariant complex, with the nilpotency step.
    Cohomology(AlgebraArgs),
    /// Search for a closed non-degenerate 2-form.
    Symplectic(AlgebraArgs),
    /// Connection-level curvature invariants of the orthonormal metric.
    Curvature(AlgebraArgs),
    /// Torsion classification of an almost Hermitian structure.
    Classify(ClassifyArgs),
    /// Ranks of the four torsion-component projectors.
    GhDims {
        /// Half-dimension n, 2 ≤ n ≤ 5.
        #[arg(long)]
        n: u8,
    },
    /// Torsion type of a 3-form in dimension 7.
    ClassifyG2(ClassifyG2Args),
    /// Geodesic rays and equal-parameter circles on a parametric surface.
    Geodesics(GeodesicsArgs),
    /// Volume of a Euclidean ball.
    Ball {
        #[arg(long)]
        dim: u32,
        #[arg(long, default_value_t = 1.0)]
        radius: f64,
    },
    /// Radius at which the Euclidean ball has unit volume.
    UnitRadius {
        #[arg(long)]
        dim: u32,
    },
    /// Volume of the unit-volume ball intersected with a symmetric slab.
    Slab {
        #[arg(long)]
        dim: u32,
        #[arg(long)]
        half_width: f64,
    },
    /// The r² and r⁴ coefficients of the geodesic-ball volume expansion.
    Expansion(ExpansionArgs),
    /// Volume of a tube around a degree-k hypersurface in CP^n.
    Tube {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        r: f64,
    },
}

#[derive(Subcommand)]
enum VerifyWhat {
    /// The closed non-parallel 4-form construction, end to end.
    Theorem7,
    /// The two dimensional-reduction identities for Ω±.
    Reductions,
}

#[derive(Args)]
struct AlgebraArgs {
    /// `@m6`, `@iwasawa`, `@heisenberg3`, `@abelian:N`, or a spec file path.
    #[arg(long)]
    algebra: String,
}

#[derive(Args)]
struct ClassifyArgs {
    #[arg(long)]
    algebra: String,
    /// `@standard`, `@standard:N`, `@iwasawa-ak`, or a matrix file path.
    #[arg(long = "J")]
    j: String,
}

#[derive(Args)]
struct ClassifyG2Args {
    /// A 7-dimensional algebra reference.
    #[arg(long)]
    algebra: String,
    /// 3-form literal, `@standard` for the canonical positive 3-form,
    /// or a file path.
    #[arg(long, default_value = "@standard")]
    phi: String,
}

#[derive(Args)]
struct GeodesicsArgs {
    /// Inline `(x, y, z)` expression triple, `@torus`/`@plane`/`@sphere`,
    /// or a file containing one.
    #[arg(long)]
    surface: String,
    /// Launch point `a,b`.
    #[arg(long, default_value = "0,0")]
    origin: String,
    /// Number of spray directions (m+1 rays are emitted).
    #[arg(long, default_value_t = 100)]
    rays: usize,
    /// ODE-parameter length of each ray.
    #[arg(long, default_value_t = 4.0)]
    radius: f64,
    /// Integration step.
    #[arg(long, default_value_t = 0.01)]
    step: f64,
    /// Circle spacing; 0 emits no circles.
    #[arg(long, default_value_t = 0.0)]
    circles: f64,
    /// Output path; stdout when omitted.
    #[arg(long)]
    out: Option<String>,
    /// `json` or `csv`.
    #[arg(long, default_value = "json")]
    format: String,
}

#[derive(Args)]
struct ExpansionArgs {
    /// Derive the curvature data exactly from an algebra reference.
    #[arg(long, conflicts_with = "scalars")]
    algebra: Option<String>,
    /// Comma-separated `s,ric2,r2,lap` numeric curvature data.
    #[arg(long, requires = "n")]
    scalars: Option<String>,
    /// Half-dimension for `--scalars` input (may be half-integral).
    #[arg(long)]
    n: Option<f64>,
}

fn main() {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => {}
        Err(err) => {
            let payload = serde_json::json!({
                "error": {
                    "message": err.message,
                    "kind": err.kind,
                }
            });
            println!("{}", serde_json::to_string_pretty(&payload).unwrap());
            std::process::exit(1);
        }
    }
}

pub(crate) struct CliError {
    kind: &'static str,
    message: String,
}

impl CliError {
    pub(crate) fn new(kind: &'static str, message: impl Into<String>) -> Self {
        CliError {
            kind,
            message: message.into(),
        }
    }
}

fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Verify { what } => match what {
            VerifyWhat::Theorem7 => verify_theorem7(),
            VerifyWhat::Reductions => verify_reductions(),
        },
        Command::Cohomology(args) => cohomology(args),
        Command::Symplectic(args) => symplectic(args),
        Command::Curvature(args) => curvature_cmd(args),
        Command::Classify(args) => classify(args),
        Command::GhDims { n } => gh_dims(n),
        Command::ClassifyG2(args) => classify_g2(args),
        Command::Geodesics(args) => geodesics(args),
        Command::Ball { dim, radius } => {
            if dim < 1 {
                return Err(CliError::new("domain", "dimension must be at least 1"));
            }
            if radius < 0.0 {
                return Err(CliError::new("domain", "radius must be nonnegative"));
            }
            let mut rep = Report::new("ball");
            rep.input("dim", dim.into());
            rep.input("radius", sig12(radius));
            rep.result("volume", sig12(volume::ball_volume(dim, radius)));
            rep.print();
            Ok(())
        }
        Command::UnitRadius { dim } => {
            if dim < 1 {
                return Err(CliError::new("domain", "dimension must be at least 1"));
            }
            let mut rep = Report::new("unit-radius");
            rep.input("dim", dim.into());
            rep.result("radius", sig12(volume::unit_volume_radius(dim)));
            rep.print();
            Ok(())
        }
        Command::Slab { dim, half_width } => {
            if dim < 2 {
                return Err(CliError::new("domain", "slab volumes need dimension ≥ 2"));
            }
            if half_width < 0.0 {
                return Err(CliError::new("domain", "half-width must be nonnegative"));
            }
            let r_d = volume::unit_volume_radius(dim);
            let mut rep = Report::new("slab");
            rep.input("dim", dim.into());
            rep.input("half_width", sig12(half_width));
            if half_width > r_d {
                rep.warn(format!(
                    "half-width exceeds the unit-volume radius {r_d:.6}; clamped"
                ));
            }
            rep.result("unit_volume_radius", sig12(r_d));
            rep.result("volume", sig12(volume::slab_volume(dim, half_width)));
            rep.print();
            Ok(())
        }
        Command::Expansion(args) => expansion(args),
        Command::Tube { n, k, r } => {
            if n < 1 || k < 1 {
                return Err(CliError::new("domain", "need n ≥ 1 and k ≥ 1"));
            }
            if r < 0.0 {
                return Err(CliError::new("domain", "radius must be nonnegative"));
            }
            let mut rep = Report::new("tube");
            rep.input("n", n.into());
            rep.input("k", k.into());
            rep.input("r", sig12(r));
            rep.result("volume", sig12(volume::tube_volume_cpn(n, k, r)));
            rep.print();
            Ok(())
        }
    }
}

fn verify_theorem7() -> Result<(), CliError> {
    let t = std::time::Instant::now();
    let outcome = structures::theorem7_verify()
        .map_err(|e| CliError::new("verification", e.to_string()))?;
    let mut rep = Report::new("verify theorem7");
    rep.result("closed_after_sub", outcome.closed_after_sub.into());
    rep.result("nonclosed_before_sub", outcome.nonclosed_before_sub.into());
    rep.result("irrational", outcome.irrational.into());
    rep.result(
        "ideal_witness_index",
        (outcome.ideal_witness_index as u64).into(),
    );
    rep.result(
        "residue_monomials",
        outcome
            .residue_monomials
            .iter()
            .map(|m| serde_json::Value::from(m.clone()))
            .collect::<Vec<_>>()
            .into(),
    );
    rep.result("ideal_span_rank", (outcome.ideal_span_rank as u64).into());
    let census: Vec<serde_json::Value> = outcome
        .simple_form_census
        .iter()
        .map(|(name, closed)| serde_json::json!({"form": name, "closed": closed}))
        .collect();
    rep.result("simple_form_census", census.into());
    rep.result("elapsed_ms", sig12(t.elapsed().as_secs_f64() * 1e3));
    rep.print();
    Ok(())
}

fn verify_reductions() -> Result<(), CliError> {
    let render = |r: &structures::ReductionReport| {
        let orth: Vec<serde_json::Value> = r
            .orthogonality
            .iter()
            .map(|(label, ok)| serde_json::json!({"condition": label, "zero": ok}))
            .collect();
        serde_json::json!({
            "holds": r.holds,
            "residue": r.residue.to_literal(),
            "orthogonality": orth,
        })
    };
    let minus = structures::verify_reduction_minus();
    let plus = structures::verify_reduction_plus();
    let mut rep = Report::new("verify reductions");
    rep.result("minus", render(&minus));
    rep.result("plus", render(&plus));
    rep.result("all_hold", (minus.holds && plus.holds).into());
    rep.print();
    Ok(())
}

fn cohomology(args: AlgebraArgs) -> Result<(), CliError> {
    let spec = inputs::load_algebra(&args.algebra)?;
    let betti = spec.invariant_cohomology();
    let mut rep = Report::new("cohomology");
    rep.input("algebra", args.algebra.clone().into());
    rep.result(
        "betti",
        betti
            .b
            .iter()
            .map(|&v| serde_json::Value::from(v as u64))
            .collect::<Vec<_>>()
            .into(),
    );
    rep.result("euler_characteristic", betti.euler_characteristic().into());
    rep.result("poincare_symmetric", betti.is_palindromic().into());
    match spec.nilpotency_step() {
        Ok(s) => rep.result("nilpotency_step", s.into()),
        Err(e) => {
            rep.result("nilpotency_step", serde_json::Value::Null);
            rep.warn(e.to_string());
        }
    }
    rep.result(
        "rational_structure_constants",
        spec.structure_constants_satisfy(|c| c.is_rational()).into(),
    );
    rep.print();
    Ok(())
}

fn symplectic(args: AlgebraArgs) -> Result<(), CliError> {
    let spec = inputs::load_algebra(&args.algebra)?;
    let seed = inputs::seed_from_env();
    let outcome = spec
        .symplectic_existence(seed)
        .map_err(|e| CliError::new("domain", e.to_string()))?;
    let mut rep = Report::new("symplectic");
    rep.input("algebra", args.algebra.clone().into());
    rep.input("seed", seed.into());
    match outcome {
        Some(w) => {
            rep.result("witness", w.form.to_literal().into());
            rep.result("top_power", w.top_power.to_literal().into());
            rep.result("method", format!("{:?}", w.method).into());
            rep.result("exists", true.into());
        }
        None => {
            rep.result("witness", serde_json::Value::Null);
            rep.result("exists", false.into());
            rep.result("method", "SymbolicPfaffianVanishes".into());
        }
    }
    rep.print();
    Ok(())
}

fn curvature_cmd(args: AlgebraArgs) -> Result<(), CliError> {
    let spec = inputs::load_algebra(&args.algebra)?;
    let tensor = curvature::curvature(&spec);
    let scalars = tensor.scalars();
    let einstein = tensor.einstein_report();
    let mut rep = Report::new("curvature");
    rep.input("algebra", args.algebra.clone().into());
    rep.result("s", scalar_value(&scalars.s));
    rep.result("ric_norm_sq", scalar_value(&scalars.ric_norm_sq));
    rep.result("r_norm_sq", scalar_value(&scalars.r_norm_sq));
    rep.result("laplacian_s", scalar_value(&scalars.laplacian_s));
    rep.result("einstein", einstein.einstein.into());
    rep.result(
        "ricci_eigenvalues",
        match &einstein.eigenvalues {
            Some(eig) => eig.iter().map(scalar_value).collect::<Vec<_>>().into(),
            None => serde_json::Value::Null,
        },
    );
    let symmetries: Vec<serde_json::Value> = tensor
        .symmetry_residues()
        .into_iter()
        .map(|(name, ok)| serde_json::json!({"symmetry": name, "holds": ok}))
        .collect();
    rep.result("symmetries", symmetries.into());
    rep.print();
    Ok(())
}

fn classify(args: ClassifyArgs) -> Result<(), CliError> {
    let spec = inputs::load_algebra(&args.algebra)?;
    let j = inputs::load_j_matrix(&args.j)?;
    let ahs = hervella::AlmostHermitian::new(spec, j)
        .map_err(|e| CliError::new("domain", e.to_string()))?;
    let report = ahs
        .classify()
        .map_err(|e| CliError::new("classification", e.to_string()))?;
    let mut rep = Report::new("classify");
    rep.input("algebra", args.algebra.clone().into());
    rep.input("J", args.j.clone().into());
    let norms = serde_json::json!({
        "w1": scalar_value(&report.norms[0]),
        "w2": scalar_value(&report.norms[1]),
        "w3": scalar_value(&report.norms[2]),
        "w4": scalar_value(&report.norms[3]),
        "total": scalar_value(&report.total_norm_sq),
    });
    rep.result("norms_sq", norms);
    rep.result("class", report.class_label().into());
    rep.result(
        "minimal_class",
        report
            .minimal_class
            .iter()
            .map(|&i| serde_json::Value::from(i as u64))
            .collect::<Vec<_>>()
            .into(),
    );
    rep.result("kahler", report.kahler.into());
    rep.result("hermitian", report.hermitian.into());
    rep.result("quasi_kahler", report.quasi_kahler.into());
    rep.result("lee_form", report.lee_form.to_literal().into());
    rep.result(
        "positive_orientation",
        report.positive_orientation.into(),
    );
    rep.result("cross_checks_consistent", true.into());
    rep.print();
    Ok(())
}

fn gh_dims(n: u8) -> Result<(), CliError> {
    let dims = hervella::verify_gh_dimensions(n)
        .map_err(|e| CliError::new("domain", e.to_string()))?;
    let mut rep = Report::new("gh-dims");
    rep.input("n", n.into());
    rep.result(
        "ranks",
        dims.ranks
            .iter()
            .map(|&v| serde_json::Value::from(v as u64))
            .collect::<Vec<_>>()
            .into(),
    );
    rep.result(
        "formula",
        dims.formula
            .iter()
            .map(|&v| serde_json::Value::from(v as u64))
            .collect::<Vec<_>>()
            .into(),
    );
    rep.result("matches_formula", dims.matches_formula().into());
    rep.result("constrained_dim", (dims.constrained_dim as u64).into());
    rep.result("total_rank", (dims.total() as u64).into());
    rep.print();
    Ok(())
}

fn classify_g2(args: ClassifyG2Args) -> Result<(), CliError> {
    let spec = inputs::load_algebra(&args.algebra)?;
    let phi = inputs::load_three_form(&args.phi, 7)?;
    let report = structures::classify_g2(&spec, &phi)
        .map_err(|e| CliError::new("domain", e.to_string()))?;
    let mut rep = Report::new("classify-g2");
    rep.input("algebra", args.algebra.clone().into());
    rep.input("phi", args.phi.clone().into());
    rep.result("calibrated", report.calibrated.into());
    rep.result("cocalibrated", report.cocalibrated.into());
    rep.result("parallel", report.parallel.into());
    rep.result(
        "nearly_parallel_constant",
        match &report.nearly_parallel_constant {
            Some(c) => scalar_value(c),
            None => serde_json::Value::Null,
        },
    );
    rep.result("d_phi", report.d_phi.to_literal().into());
    rep.result("d_star_phi", report.d_star_phi.to_literal().into());
    rep.print();
    Ok(())
}

fn expansion(args: ExpansionArgs) -> Result<(), CliError> {
    let mut rep = Report::new("expansion");
    let input = match (&args.algebra, &args.scalars) {
        (Some(name), None) => {
            let spec = inputs::load_algebra(name)?;
            if spec.dim() % 2 != 0 {
                rep.warn("odd-dimensional algebra: n is half-integral".to_string());
            }
            let scalars = curvature::curvature(&spec).scalars();
            rep.input("algebra", name.clone().into());
            rep.result(
                "exact_inputs",
                serde_json::json!({
                    "s": scalars.s.to_string(),
                    "ric_norm_sq": scalars.ric_norm_sq.to_string(),
                    "r_norm_sq": scalars.r_norm_sq.to_string(),
                    "laplacian_s": scalars.laplacian_s.to_string(),
                }),
            );
            volume::ExpansionInput {
                n: spec.dim() as f64 / 2.0,
                s: scalars.s.to_f64(),
                ric_norm_sq: scalars.ric_norm_sq.to_f64(),
                r_norm_sq: scalars.r_norm_sq.to_f64(),
                laplacian_s: 0.0,
            }
        }
        (None, Some(list)) => {
            let n = args.n.expect("clap enforces --n with --scalars");
            let parts: Vec<f64> = list
                .split(',')
                .map(|p| p.trim().parse::<f64>())
                .collect::<Result<_, _>>()
                .map_err(|_| {
                    CliError::new("usage", "--scalars wants four numbers `s,ric2,r2,lap`")
                })?;
            if parts.len() != 4 {
                return Err(CliError::new(
                    "usage",
                    "--scalars wants four numbers `s,ric2,r2,lap`",
                ));
            }
            rep.input("scalars", list.clone().into());
            rep.input("n", sig12(n));
            volume::ExpansionInput {
                n,
                s: parts[0],
                ric_norm_sq: parts[1],
                r_norm_sq: parts[2],
                laplacian_s: parts[3],
            }
        }
        _ => {
            return Err(CliError::new(
                "usage",
                "pass exactly one of --algebra or --scalars",
            ))
        }
    };
    rep.result("n", sig12(input.n));
    rep.result("c2", sig12(volume::c2(&input)));
    rep.result("c4", sig12(volume::c4(&input)));
    rep.result(
        "c2_printed_variant",
        sig12(volume::c2_printed_variant(&input)),
    );
    rep.result(
        "c2_note",
        "c2 uses the sphere-oracle constant -s/(12(n+1)); c2_printed_variant records -s/(3(n+1))"
            .into(),
    );
    rep.result(
        "flat_to_order_2",
        volume::is_flat_to_order(&input, 1).into(),
    );
    rep.result(
        "flat_to_order_4",
        volume::is_flat_to_order(&input, 2).into(),
    );
    rep.print();
    Ok(())
}

fn geodesics(args: GeodesicsArgs) -> Result<(), CliError> {
    let patch = inputs::load_surface(&args.surface)?;
    let (a, b) = inputs::parse_origin(&args.origin)?;
    if args.rays < 1 {
        return Err(CliError::new("domain", "need at least one ray"));
    }
    if args.radius <= 0.0 || args.step <= 0.0 {
        return Err(CliError::new("domain", "radius and step must be positive"));
    }
    if args.circles < 0.0 {
        return Err(CliError::new("domain", "circle spacing must be nonnegative"));
    }
    let metric = surface::MetricData::new(&patch);
    metric
        .coefficients_at(a, b)
        .map_err(|e| CliError::new("domain", e.to_string()))?;
    let rays = geodesic::spray(&patch, &metric, a, b, args.rays, args.radius, args.step);
    let circles = if args.circles > 0.0 {
        geodesic::circles(&rays, args.radius, args.circles, args.step)
    } else {
        Vec::new()
    };

    let truncated = rays.iter().filter(|r| r.truncated.is_some()).count();
    let body = match args.format.as_str() {
        "json" => {
            let mut rep = Report::new("geodesics");
            rep.input("surface", patch.source().into());
            rep.input("origin", format!("{a},{b}").into());
            rep.input("rays", (args.rays as u64).into());
            rep.input("radius", sig12(args.radius));
            rep.input("step", sig12(args.step));
            rep.input("circles", sig12(args.circles));
            if truncated > 0 {
                rep.warn(format!(
                    "{truncated} ray(s) truncated at a metric degeneracy"
                ));
            }
            rep.result("surface", patch.source().into());
            let rays_json: Vec<serde_json::Value> = rays
                .iter()
                .map(|ray| {
                    ray.samples
                        .iter()
                        .map(|s| {
                            serde_json::Value::from(vec![
                                sig12(s.xyz[0]),
                                sig12(s.xyz[1]),
                                sig12(s.xyz[2]),
                            ])
                        })
                        .collect::<Vec<_>>()
                        .into()
                })
                .collect();
            rep.result("rays", rays_json.into());
            let circles_json: Vec<serde_json::Value> = circles
                .iter()
                .map(|c| {
                    c.points
                        .iter()
                        .map(|p| {
                            serde_json::Value::from(vec![sig12(p[0]), sig12(p[1]), sig12(p[2])])
                        })
                        .collect::<Vec<_>>()
                        .into()
                })
                .collect();
            rep.result("circles", circles_json.into());
            let hints: Vec<serde_json::Value> = circles
                .iter()
                .map(|c| {
                    serde_json::json!({
                        "parameter": sig12(c.parameter),
                        "complete": c.complete,
                        "self_intersection_hint": c.self_intersection_hint,
                    })
                })
                .collect();
            rep.result("circle_flags", hints.into());
            rep.render()
        }
        "csv" => {
            let mut out = String::from("curve,s,u,v,x,y,z\n");
            for (i, ray) in rays.iter().enumerate() {
                for s in &ray.samples {
                    out.push_str(&format!(
                        "ray-{i},{},{},{},{},{},{}\n",
                        fmt12(s.s),
                        fmt12(s.u),
                        fmt12(s.v),
                        fmt12(s.xyz[0]),
                        fmt12(s.xyz[1]),
                        fmt12(s.xyz[2])
                    ));
                }
            }
            for (ci, c) in circles.iter().enumerate() {
                for (uv, p) in c.uv.iter().zip(&c.points) {
                    out.push_str(&format!(
                        "circle-{},{},{},{},{},{},{}\n",
                        ci + 1,
                        fmt12(c.parameter),
                        fmt12(uv[0]),
                        fmt12(uv[1]),
                        fmt12(p[0]),
                        fmt12(p[1]),
                        fmt12(p[2])
                    ));
                }
            }
            out
        }
        other => {
            return Err(CliError::new(
                "usage",
                format!("unknown format `{other}`; use json or csv"),
            ))
        }
    };
    match &args.out {
        Some(path) => std::fs::write(path, body)
            .map_err(|e| CliError::new("io", format!("writing {path}: {e}")))?,
        None => print!("{body}"),
    }
    Ok(())
}

fn fmt12(x: f64) -> String {
    let rounded = report::round_sig12(x);
    format!("{rounded}")
}
