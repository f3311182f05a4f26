//! Command-line surface: generate and inspect polygons, apply pentagram
//! maps, run verification suites, and emit spectral reports and SVG plots.
//!
//! Exit codes: 0 ok, 1 verification failure, 2 bad arguments or input,
//! 3 generation failure, 4 degenerate geometry, 5 spectral structure
//! mismatch, 6 plot chart failure.

mod doc;
mod plot;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use doc::{parse_variant, PolygonDoc, SpectralReport, SpectralTerm};
use pentagram_core::error::Error as CoreError;
use pentagram_core::maps::{apply_map, MapSpec};

use pentagram_core::polygon::{
    is_corrugated, make_corrugated, make_partially_corrugated, random_generic_polygon,
    Coefficients, TwistedPolygon,
};
use pentagram_core::scalar::parse_rat;
use pentagram_core::spectral::{
    casimirs, extract_invariants, finite_branch_count, genus, newton_branches, spectral_function,
    SpectralEnd,
};
use pentagram_core::verify;

#[derive(Parser)]
#[command(name = "pentagram", version, about = "Exact pentagram maps on twisted polygons")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// Input polygon document (JSON)
    #[arg(long, global = true)]
    input: Option<PathBuf>,
    /// Output path; stdout when omitted
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Output format (only json is supported)
    #[arg(long, global = true, default_value = "json")]
    format: String,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate a seeded random generic polygon
    Generate {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        seed: u64,
        /// Bound on numerators and denominators of the coefficients
        #[arg(long, default_value_t = 10)]
        bound: u32,
        /// Zero the middle coefficient columns (corrugated class)
        #[arg(long)]
        corrugated: bool,
        /// Zero the partial-corrugation columns: give the dent position and
        /// the diagonal dimension as M,L
        #[arg(long, value_name = "M,L")]
        partially_corrugated: Option<String>,
    },
    /// Apply a pentagram map to a polygon document
    Apply {
        /// Map description, e.g. {"variant":"dented","m":1}
        #[arg(long)]
        map: String,
        #[arg(long, default_value_t = 1)]
        iterations: usize,
        /// Emit every intermediate coefficient array
        #[arg(long)]
        trace: bool,
    },
    /// Inspect a polygon document: ratio coordinates, closedness, classes
    Coeffs,
    /// Run a verification suite
    Verify {
        /// duality | scaling | conservation | corrugated | psi | casimirs | closed | lax
        suite: String,
        #[arg(long, default_value_t = 3)]
        d: usize,
        #[arg(long, default_value_t = 7)]
        n: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long = "I", value_delimiter = ',')]
        i: Option<Vec<usize>>,
        #[arg(long = "J", value_delimiter = ',')]
        j: Option<Vec<usize>>,
        #[arg(long)]
        m: Option<usize>,
        #[arg(long)]
        p: Option<usize>,
        #[arg(long)]
        q: Option<usize>,
        #[arg(long)]
        r: Option<usize>,
        #[arg(long)]
        l: Option<usize>,
        /// Source dimension for the psi suite
        #[arg(long)]
        c: Option<usize>,
        /// Scaling factor as a rational literal
        #[arg(long)]
        s: Option<String>,
        /// Map variant name for the conservation suite
        #[arg(long)]
        variant: Option<String>,
    },
    /// Emit the spectral report of a polygon under a Lax variant
    Spectrum {
        /// dented | tilde | partial | short_diagonal | corrugated
        #[arg(long)]
        variant: String,
        #[arg(long)]
        m: Option<usize>,
        #[arg(long)]
        l: Option<usize>,
        /// Also compute the genus of the spectral curve
        #[arg(long)]
        genus: bool,
    },
    /// Render one or more iterations as an SVG polyline plot
    Plot {
        /// Affine chart: a homogeneous coordinate index, or "sum" (default)
        #[arg(long)]
        chart: Option<String>,
        /// Two affine axes to draw, as X,Y indices
        #[arg(long, value_name = "X,Y")]
        axes: Option<String>,
        #[arg(long, default_value_t = 1)]
        iterations: usize,
        /// Map description (defaults to the dented map with m=1)
        #[arg(long)]
        map: Option<String>,
    },
}

struct CliError {
    code: u8,
    msg: String,
}

impl CliError {
    fn new(code: u8, msg: impl Into<String>) -> Self {
        CliError { code, msg: msg.into() }
    }
}

fn bad_args(msg: impl Into<String>) -> CliError {
    CliError::new(2, msg)
}

/// Exit-code mapping for computation-phase core errors.
fn compute_err(e: CoreError) -> CliError {
    let code = match &e {
        CoreError::ExhaustedRetries(_) => 3,
        CoreError::StructureMismatch { .. }
        | CoreError::VariantMismatch(_)
        | CoreError::ZeroDiscriminant
        | CoreError::NonSimpleBranching(_) => 5,
        _ => 4,
    };
    CliError::new(code, e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {}", e.msg);
            ExitCode::from(e.code)
        }
    }
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), CliError> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| bad_args(format!("cannot write {}: {e}", p.display()))),
        None => {
            println!("{}", text.trim_end());
            Ok(())
        }
    }
}

fn read_polygon(input: &Option<PathBuf>) -> Result<TwistedPolygon, CliError> {
    let path = input.as_ref().ok_or_else(|| bad_args("--input is required"))?;
    let text = fs::read_to_string(path)
        .map_err(|e| bad_args(format!("cannot read {}: {e}", path.display())))?;
    let docp: PolygonDoc =
        serde_json::from_str(&text).map_err(|e| bad_args(format!("invalid polygon document: {e}")))?;
    let coeffs = docp.to_coefficients().map_err(|e| bad_args(e.to_string()))?;
    TwistedPolygon::from_coefficients(coeffs).map_err(compute_err)
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 { a } else { gcd(b, a % b) }
}

fn pretty<T: serde::Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("serialization cannot fail")
}

fn run(cli: Cli) -> Result<u8, CliError> {
    if cli.format != "json" {
        return Err(bad_args(format!("unsupported format {:?}", cli.format)));
    }
    match cli.cmd {
        Cmd::Generate { d, n, seed, bound, corrugated, partially_corrugated } => {
            let mut coeffs = random_generic_polygon(d, n, seed, bound).map_err(|e| match e {
                CoreError::DegenerateInput(m) => bad_args(m),
                other => compute_err(other),
            })?;
            if corrugated {
                coeffs = make_corrugated(&coeffs).map_err(compute_err)?;
            }
            if let Some(ml) = partially_corrugated {
                let (m, l) = ml
                    .split_once(',')
                    .and_then(|(a, b)| Some((a.trim().parse().ok()?, b.trim().parse().ok()?)))
                    .ok_or_else(|| bad_args("--partially-corrugated expects M,L"))?;
                coeffs = make_partially_corrugated(&coeffs, m, l).map_err(compute_err)?;
            }
            emit(&cli.output, &pretty(&PolygonDoc::from_coefficients(&coeffs)))?;
            Ok(0)
        }
        Cmd::Apply { map, iterations, trace } => {
            let spec: MapSpec =
                serde_json::from_str(&map).map_err(|e| bad_args(format!("invalid map spec: {e}")))?;
            let mut poly = read_polygon(&cli.input)?;
            let mut steps = vec![PolygonDoc::from_coefficients(&poly.coeffs)];
            for step in 0..iterations {
                poly = apply_map(&poly, &spec).map_err(|e| {
                    let mut err = compute_err(e);
                    err.msg = format!("at iteration {}: {}", step + 1, err.msg);
                    err
                })?;
                steps.push(PolygonDoc::from_coefficients(&poly.coeffs));
            }
            if trace {
                #[derive(serde::Serialize)]
                struct Trace {
                    iterations: usize,
                    trace: Vec<PolygonDoc>,
                }
                emit(&cli.output, &pretty(&Trace { iterations, trace: steps }))?;
            } else {
                emit(&cli.output, &pretty(steps.last().unwrap()))?;
            }
            Ok(0)
        }
        Cmd::Coeffs => {
            let poly = read_polygon(&cli.input)?;
            let (d, n) = (poly.d(), poly.n());
            let window = poly.as_window(n + d + 2 + d).map_err(compute_err)?;
            // ratio coordinates are undefined when a needed coefficient is
            // zero (corrugated inputs); report null rather than failing
            let tilde = match Coefficients::Periodic(poly.coeffs.clone()).tilde() {
                Ok(t) => Some(t),
                Err(CoreError::DivisionByZero(_)) => None,
                Err(e) => return Err(compute_err(e)),
            };
            #[derive(serde::Serialize)]
            struct Inspection {
                d: usize,
                n: usize,
                coeffs: Vec<Vec<String>>,
                tilde: Option<Vec<Vec<String>>>,
                closed: bool,
                corrugated: bool,
                coprime_period: bool,
            }
            let report = Inspection {
                d,
                n,
                coeffs: PolygonDoc::from_coefficients(&poly.coeffs).coeffs,
                tilde: tilde.map(|t| {
                    t.iter()
                        .map(|r| r.iter().map(pentagram_core::scalar::format_rat).collect())
                        .collect()
                }),
                closed: pentagram_core::polygon::is_closed(&poly.coeffs),
                corrugated: is_corrugated(&window).map_err(compute_err)?,
                coprime_period: gcd(n, d + 1) == 1,
            };
            emit(&cli.output, &pretty(&report))?;
            Ok(0)
        }
        Cmd::Verify { suite, d, n, seed, i, j, m, p, q, r, l, c, s, variant } => {
            let report = match suite.as_str() {
                "duality" => {
                    let iv = i.ok_or_else(|| bad_args("duality needs --I"))?;
                    let jv = j.unwrap_or_else(|| vec![1; d - 1]);
                    verify::verify_duality(d, n, &iv, &jv, seed)
                }
                "scaling" => {
                    let sv = s.ok_or_else(|| bad_args("scaling needs --s"))?;
                    let sv = parse_rat(&sv).map_err(|e| bad_args(e.to_string()))?;
                    let mv = m.ok_or_else(|| bad_args("scaling needs --m"))?;
                    verify::verify_scaling(d, n, mv, &sv, seed)
                }
                "conservation" => {
                    let vname = variant.ok_or_else(|| bad_args("conservation needs --variant"))?;
                    let spec = map_spec_from_parts(&vname, m, p, q, r, l, i, j)?;
                    verify::verify_conservation(d, n, &spec, seed)
                }
                "corrugated" => verify::verify_corrugated(d, n, seed),
                "psi" => {
                    let cv = c.ok_or_else(|| bad_args("psi needs --c"))?;
                    let mv = m.unwrap_or(1);
                    let pv = p.ok_or_else(|| bad_args("psi needs --p"))?;
                    verify::verify_psi(cv, n, mv, pv, seed)
                }
                "casimirs" => verify::verify_casimirs(n, seed),
                "closed" => verify::verify_closed(n, seed),
                "lax" => verify::verify_lax(d, n, seed),
                other => return Err(bad_args(format!("unknown suite {other:?}"))),
            };
            emit(&cli.output, &pretty(&report))?;
            Ok(if report.pass { 0 } else { 1 })
        }
        Cmd::Spectrum { variant, m, l, genus: want_genus } => {
            let poly = read_polygon(&cli.input)?;
            let variant = parse_variant(&variant, m, l).map_err(|e| bad_args(e.to_string()))?;
            let coeffs = &poly.coeffs;
            let rfun = spectral_function(coeffs, &variant).map_err(compute_err)?;
            let invariants = extract_invariants(&rfun, &variant, coeffs).map_err(compute_err)?;
            let cas = casimirs(&invariants, &variant, coeffs).map_err(compute_err)?;
            let fb = finite_branch_count(&rfun).map_err(compute_err)?;
            let (genus_val, genus_note) = if want_genus {
                match genus(&rfun) {
                    Ok(g) => (Some(g), None),
                    Err(CoreError::NonSimpleBranching(msg)) => (None, Some(msg)),
                    Err(e) => return Err(compute_err(e)),
                }
            } else {
                (None, None)
            };
            let report = SpectralReport {
                variant,
                n: coeffs.n,
                d: coeffs.d,
                r: rfun
                    .0
                    .iter()
                    .map(|((k, lambda), coeff)| SpectralTerm {
                        k: *k,
                        lambda: *lambda,
                        coeff: pentagram_core::scalar::format_rat(coeff),
                    })
                    .collect(),
                invariants,
                casimirs: cas,
                genus: genus_val,
                genus_note,
                finite_branch_count: fb.count,
                squarefree: fb.squarefree,
                branches_at_zero: newton_branches(&rfun, SpectralEnd::Zero).map_err(compute_err)?,
                branches_at_infinity: newton_branches(&rfun, SpectralEnd::Infinity)
                    .map_err(compute_err)?,
            };
            emit(&cli.output, &pretty(&report))?;
            Ok(0)
        }
        Cmd::Plot { chart, axes, iterations, map } => {
            let poly = read_polygon(&cli.input)?;
            let d = poly.d();
            if d != 2 && d != 3 {
                return Err(bad_args("plot supports dimensions 2 and 3"));
            }
            let spec: MapSpec = match map {
                Some(text) => serde_json::from_str(&text)
                    .map_err(|e| bad_args(format!("invalid map spec: {e}")))?,
                None => MapSpec::Dented { m: 1 },
            };
            let chart = match chart.as_deref() {
                None | Some("sum") => plot::Chart::Sum,
                Some(text) => plot::Chart::Coordinate(
                    text.parse().map_err(|_| bad_args("--chart expects an index or \"sum\""))?,
                ),
            };
            let axes = match axes {
                Some(text) => {
                    let (a, b) = text
                        .split_once(',')
                        .and_then(|(a, b)| Some((a.trim().parse().ok()?, b.trim().parse().ok()?)))
                        .ok_or_else(|| bad_args("--axes expects X,Y"))?;
                    (a, b)
                }
                None => (0, 1),
            };
            // iterate in window form so periods sharing a factor with d+1
            // (whose images have no periodic coefficients over Q) still plot
            let mut window = poly.as_window(poly.n() + d + 2).map_err(compute_err)?;
            let mut orbits = Vec::new();
            for step in 0..=iterations.max(1) - 1 {
                let pts =
                    plot::to_affine(&window.verts, window.n, chart, axes).map_err(|e| match e {
                        CoreError::DegenerateIntersection { index, .. } => CliError::new(
                            6,
                            format!(
                                "vertex {index} lies on the chart hyperplane at infinity (step {step})"
                            ),
                        ),
                        other => CliError::new(6, other.to_string()),
                    })?;
                orbits.push(pts);
                if step < iterations - 1 {
                    window = pentagram_core::maps::apply_map_window(&window, &spec)
                        .map_err(compute_err)?;
                }
            }
            let svg = plot::render_svg(&orbits);
            match &cli.output {
                Some(p) => fs::write(p, &svg)
                    .map_err(|e| bad_args(format!("cannot write {}: {e}", p.display())))?,
                None => print!("{svg}"),
            }
            Ok(0)
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn map_spec_from_parts(
    name: &str,
    m: Option<usize>,
    p: Option<usize>,
    q: Option<usize>,
    r: Option<usize>,
    l: Option<usize>,
    i: Option<Vec<usize>>,
    j: Option<Vec<usize>>,
) -> Result<MapSpec, CliError> {
    match name {
        "dented" => Ok(MapSpec::Dented { m: m.ok_or_else(|| bad_args("dented needs --m"))? }),
        "deep_dented" => Ok(MapSpec::DeepDented {
            m: m.ok_or_else(|| bad_args("deep_dented needs --m"))?,
            p: p.ok_or_else(|| bad_args("deep_dented needs --p"))?,
        }),
        "short_diagonal" => Ok(MapSpec::ShortDiagonal),
        "corrugated" => Ok(MapSpec::Corrugated),
        "partially_corrugated" => Ok(MapSpec::PartiallyCorrugated {
            q: q.ok_or_else(|| bad_args("partially_corrugated needs --q"))?,
            r: r.ok_or_else(|| bad_args("partially_corrugated needs --r"))?,
            l: l.ok_or_else(|| bad_args("partially_corrugated needs --l"))?,
        }),
        "generalized" => Ok(MapSpec::Generalized {
            i: i.ok_or_else(|| bad_args("generalized needs --I"))?,
            j: j.ok_or_else(|| bad_args("generalized needs --J"))?,
        }),
        other => Err(bad_args(format!("unknown map variant {other:?}"))),
    }
}
