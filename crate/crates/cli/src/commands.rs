use std::fmt::Write;
use std::fs;
use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;
use swallowtail_core::braid::{compute_braid, LoopSpec};
use swallowtail_core::catastrophe::{
    classify_with, sample_surface_implicit, sample_surface_parametric, Axis, DegeneracyClass,
    ParametricMode, Tolerances,
};
use swallowtail_core::export::{fmt_f64, mesh_csv, strands_csv};
use swallowtail_core::model::{
    build_dynamical_matrix, particle_hole_residual, pseudo_hermiticity_residual,
    traceless_dynamical_matrix,
};
use swallowtail_core::parammap::{
    general_map, jacobian, loop_feasibility, simple_map, MapVariables,
};
use swallowtail_core::spectral::{char_poly_coeffs, Quartic, Spectrum};
use swallowtail_core::{ModelParams, RawParams};

use crate::{
    AxisArg, BraidArgs, ClassifyArgs, Cli, CliError, CliResult, Format, ParamArgs, Preset,
    SurfaceArgs, SurfaceMode, SweepArgs, L1_JSON, L2_JSON,
};

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn parse_json<T: serde::de::DeserializeOwned>(text: &str, path: &str) -> CliResult<T> {
    serde_json::from_str(text).map_err(|source| CliError::Config {
        path: path.to_string(),
        source,
    })
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialise");
    s.push('\n');
    s
}

impl ParamArgs {
    fn any_set(&self) -> bool {
        self.params.is_some()
            || [
                self.delta_omega_1,
                self.delta_omega_2,
                self.g,
                self.phi_g,
                self.xi_1,
                self.phi_1,
                self.xi_2,
                self.phi_2,
                self.chi,
                self.phi_chi,
                self.gamma_1,
                self.gamma_2,
            ]
            .iter()
            .any(Option::is_some)
    }

    fn resolve(&self) -> CliResult<ModelParams> {
        let mut raw: RawParams = match &self.params {
            Some(path) => parse_json(&read(path)?, &path.display().to_string())?,
            None => RawParams::default(),
        };
        let overrides = [
            (&mut raw.delta_omega_1, self.delta_omega_1),
            (&mut raw.delta_omega_2, self.delta_omega_2),
            (&mut raw.g, self.g),
            (&mut raw.phi_g, self.phi_g),
            (&mut raw.xi_1, self.xi_1),
            (&mut raw.phi_1, self.phi_1),
            (&mut raw.xi_2, self.xi_2),
            (&mut raw.phi_2, self.phi_2),
            (&mut raw.chi, self.chi),
            (&mut raw.phi_chi, self.phi_chi),
            (&mut raw.gamma_1, self.gamma_1),
            (&mut raw.gamma_2, self.gamma_2),
        ];
        for (field, value) in overrides {
            if let Some(v) = value {
                *field = v;
            }
        }
        Ok(raw.build()?)
    }
}

#[derive(Serialize)]
struct ClassifyReport<'a> {
    coefficients: Quartic,
    #[serde(flatten)]
    class: &'a DegeneracyClass,
    spectrum: &'a Spectrum,
}

pub(crate) fn classify(args: &ClassifyArgs, cli: &Cli) -> CliResult<String> {
    let tol = Tolerances {
        scale: cli.tol_scale,
    };
    let (coeffs, class) = match (args.q, args.r, args.s) {
        (Some(q), Some(r), Some(s)) => {
            if args.params.any_set() {
                return Err(CliError::Usage(
                    "give either --q/--r/--s or parameters, not both".into(),
                ));
            }
            let c = Quartic::new(q, r, s);
            (c, classify_with(&c, None, tol)?)
        }
        (None, None, None) if args.params.any_set() => {
            let p = args.params.resolve()?;
            let e = traceless_dynamical_matrix(&p);
            let c = char_poly_coeffs(&e)?;
            (c, classify_with(&c, Some(&e), tol)?)
        }
        (None, None, None) => {
            return Err(CliError::Usage(
                "nothing to classify: give --q/--r/--s or parameters".into(),
            ))
        }
        _ => return Err(CliError::Usage("--q, --r and --s go together".into())),
    };
    let spectrum = Spectrum::of_quartic(&coeffs);
    Ok(match cli.format {
        Format::Json => to_json(&ClassifyReport {
            coefficients: coeffs,
            class: &class,
            spectrum: &spectrum,
        }),
        Format::Csv => {
            let mut out = String::from(
                "kind,defectiveness,D,L,q,r,s,re_1,im_1,re_2,im_2,re_3,im_3,re_4,im_4,multiplicities,boundary\n",
            );
            let w = &class.witnesses;
            let _ = write!(
                out,
                "{},{},{},{},{},{},{}",
                class.kind.as_str(),
                class.defectiveness.as_str(),
                fmt_f64(w.d),
                fmt_f64(w.l),
                fmt_f64(coeffs.q),
                fmt_f64(coeffs.r),
                fmt_f64(coeffs.s)
            );
            for z in &spectrum.roots {
                let _ = write!(out, ",{},{}", fmt_f64(z.re), fmt_f64(z.im));
            }
            let mult: Vec<String> = spectrum
                .multiplicities()
                .iter()
                .map(|m| m.to_string())
                .collect();
            let _ = writeln!(out, ",{},{}", mult.join(" "), w.boundary);
            out
        }
    })
}

#[derive(Serialize)]
struct SweepRow {
    q: f64,
    r: f64,
    s: f64,
    #[serde(serialize_with = "ser_roots")]
    roots: [swallowtail_core::C64; 4],
    kind: &'static str,
}

fn ser_roots<S: serde::Serializer>(
    roots: &[swallowtail_core::C64; 4],
    s: S,
) -> Result<S::Ok, S::Error> {
    roots.map(|z| [z.re, z.im]).serialize(s)
}

pub(crate) fn sweep(args: &SweepArgs, cli: &Cli) -> CliResult<String> {
    if !args.q.is_finite() {
        return Err(CliError::Usage(format!(
            "--q must be finite, got {}",
            args.q
        )));
    }
    let tol = Tolerances {
        scale: cli.tol_scale,
    };
    let grid: Vec<(f64, f64)> = args
        .r
        .0
        .values()
        .into_iter()
        .flat_map(|r| args.s.0.values().into_iter().map(move |s| (r, s)))
        .collect();
    let rows: Vec<SweepRow> = grid
        .par_iter()
        .map(|&(r, s)| {
            let c = Quartic::new(args.q, r, s);
            let class = classify_with(&c, None, tol)?;
            Ok(SweepRow {
                q: c.q,
                r,
                s,
                roots: Spectrum::of_quartic(&c).roots,
                kind: class.kind.as_str(),
            })
        })
        .collect::<CliResult<_>>()?;
    Ok(match cli.format {
        Format::Json => to_json(&rows),
        Format::Csv => {
            let mut out = String::from("q,r,s,re_1,im_1,re_2,im_2,re_3,im_3,re_4,im_4,kind\n");
            for row in &rows {
                let _ = write!(
                    out,
                    "{},{},{}",
                    fmt_f64(row.q),
                    fmt_f64(row.r),
                    fmt_f64(row.s)
                );
                for z in &row.roots {
                    let _ = write!(out, ",{},{}", fmt_f64(z.re), fmt_f64(z.im));
                }
                let _ = writeln!(out, ",{}", row.kind);
            }
            out
        }
    })
}

fn load_loop(args: &BraidArgs) -> CliResult<LoopSpec> {
    let mut spec: LoopSpec = match (&args.config, args.preset) {
        (Some(path), _) => parse_json(&read(path)?, &path.display().to_string())?,
        (None, Some(Preset::L1)) => parse_json(L1_JSON, "l1.json")?,
        (None, Some(Preset::L2)) => parse_json(L2_JSON, "l2.json")?,
        (None, None) => return Err(CliError::Usage("give --config or --preset".into())),
    };
    if let Some(n) = args.n_samples {
        spec.n_samples = n;
    }
    if let Some(d2) = args.delta_omega_2 {
        spec.delta_omega_2 = d2;
    }
    Ok(spec)
}

pub(crate) fn braid(args: &BraidArgs, cli: &Cli) -> CliResult<String> {
    let spec = load_loop(args)?;
    spec.validate()?;
    // advisory only: a failed feasibility scan must not block tracking
    if let Ok(report) = loop_feasibility(&spec) {
        for w in &report.warnings {
            eprintln!("warning: {w}");
        }
    }
    let result = compute_braid(&spec)?;
    if let Some(path) = &args.strands {
        fs::write(path, strands_csv(&result)).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        })?;
    }
    Ok(match cli.format {
        Format::Json => to_json(&result),
        Format::Csv => {
            let join = |v: Vec<String>| v.join(" ");
            format!(
                "word,permutation,cycle_type,exponent_sum,min_gap,n_samples\n{},{},{},{},{},{}\n",
                join(result.word.iter().map(|g| g.signed().to_string()).collect()),
                join(
                    result
                        .permutation
                        .iter()
                        .map(|k| (k + 1).to_string())
                        .collect()
                ),
                join(result.cycle_type().iter().map(|k| k.to_string()).collect()),
                result.exponent_sum,
                fmt_f64(result.min_gap),
                result.n_samples
            )
        }
    })
}

/// `n` points at the centres of `n` equal cells of the open interval.
fn open_axis(lo: f64, hi: f64, n: usize) -> CliResult<Axis> {
    if n == 0 {
        return Err(CliError::Usage("--resolution must be positive".into()));
    }
    let h = (hi - lo) / n as f64;
    Ok(Axis::new(lo + h / 2.0, hi - h / 2.0, n)?)
}

pub(crate) fn surface(args: &SurfaceArgs, cli: &Cli) -> CliResult<String> {
    let n = args.resolution;
    let pick = |given: Option<AxisArg>, lo: f64, hi: f64| match given {
        Some(a) => Ok(a.0),
        None => open_axis(lo, hi, n),
    };
    let mode = match args.mode {
        SurfaceMode::DoubleReal => Some(ParametricMode::DoubleReal),
        SurfaceMode::DoubleComplex => Some(ParametricMode::DoubleComplex),
        SurfaceMode::GZeroDiabolical => Some(ParametricMode::GZeroDiabolical),
        SurfaceMode::GOffsetExceptional => Some(ParametricMode::GOffsetExceptional),
        SurfaceMode::Implicit => None,
    };
    let mesh = match mode {
        Some(mode) => {
            if args.q.is_some() || args.r.is_some() || args.s.is_some() {
                return Err(CliError::Usage(
                    "--q/--r/--s apply to --mode implicit only".into(),
                ));
            }
            let (x, y) = match mode {
                ParametricMode::DoubleReal | ParametricMode::DoubleComplex => {
                    (pick(args.x, -2.0, 2.0)?, pick(args.y, -2.0, 2.0)?)
                }
                _ => (pick(args.x, 0.0, 5.0)?, pick(args.y, -5.0, 5.0)?),
            };
            sample_surface_parametric(mode, [x, y])?
        }
        None => {
            if args.x.is_some() || args.y.is_some() {
                return Err(CliError::Usage(
                    "--x/--y apply to parametric modes only".into(),
                ));
            }
            sample_surface_implicit(
                pick(args.q, -3.0, 3.0)?,
                pick(args.r, -2.0, 2.0)?,
                pick(args.s, -3.0, 3.0)?,
            )?
        }
    };
    Ok(match cli.format {
        Format::Json => to_json(&mesh),
        Format::Csv => mesh_csv(&mesh),
    })
}

#[derive(Serialize)]
struct CheckReport {
    particle_hole_residual: f64,
    pseudo_hermiticity_residual: f64,
    from_traces: Quartic,
    closed_form: Quartic,
    /// Only for the simple model at `δω₂ = 0`.
    jacobian_det: Option<f64>,
}

pub(crate) fn check(args: &ParamArgs, cli: &Cli) -> CliResult<String> {
    let p = args.resolve()?;
    let m = build_dynamical_matrix(&p);
    let e = traceless_dynamical_matrix(&p);
    let closed_form = if p.is_simple() {
        simple_map(
            &MapVariables::from_params(&p),
            p.delta_omega_1(),
            p.delta_omega_2(),
        )
    } else {
        general_map(&p)
    };
    let report = CheckReport {
        particle_hole_residual: particle_hole_residual(&m),
        pseudo_hermiticity_residual: pseudo_hermiticity_residual(&e),
        from_traces: char_poly_coeffs(&e)?,
        closed_form,
        jacobian_det: (p.is_simple() && p.delta_omega_2() == 0.0).then(|| jacobian(&p).det),
    };
    Ok(match cli.format {
        Format::Json => to_json(&report),
        Format::Csv => {
            let t = &report.from_traces;
            let c = &report.closed_form;
            let rows = [
                (
                    "particle_hole_residual",
                    fmt_f64(report.particle_hole_residual),
                ),
                (
                    "pseudo_hermiticity_residual",
                    fmt_f64(report.pseudo_hermiticity_residual),
                ),
                ("q_traces", fmt_f64(t.q)),
                ("r_traces", fmt_f64(t.r)),
                ("s_traces", fmt_f64(t.s)),
                ("q_closed_form", fmt_f64(c.q)),
                ("r_closed_form", fmt_f64(c.r)),
                ("s_closed_form", fmt_f64(c.s)),
                (
                    "det_J",
                    report.jacobian_det.map(fmt_f64).unwrap_or_default(),
                ),
            ];
            let mut out = String::from("quantity,value\n");
            for (k, v) in rows {
                let _ = writeln!(out, "{k},{v}");
            }
            out
        }
    })
}
