use std::fs::File;
use std::io::{self, BufWriter, Write};

use serde_json::json;
use su4euler::algebra::{gell_mann, structure_constants};
use su4euler::density::{bloch_coefficients, rho_full, rho_su4, spectrum_profile};
use su4euler::euler::compose;
use su4euler::haar::{
    analytic_volume, density, group_volume_over, one_form_matrix, one_form_matrix_su2,
    one_form_matrix_su3,
};
use su4euler::linalg::hermitian_eigenvalues;
use su4euler::separability::{
    char_poly_coeffs, classify, depressed_quartic, eigenvalues_via_resolvent, partial_transpose,
    scan_corners_for_each, scan_for_each, ScanConfig, ScanRecord, ScanSummary, SpectrumPolicy,
    CORNER_COUNT,
};
use su4euler::{
    DensityMatrix, EulerAngles, Group, Mat4, RangeKind, SpectrumAngles, Subsystem, VolumeMethod,
};

use crate::output::{envelope, list, matrix_json, matrix_text, num};
use crate::{
    expr, BasisArgs, CheckArgs, Command, ComposeArgs, Failure, Format, HaarArgs, MethodArg,
    RhoArgs, ScanArgs, StateArgs, VolumeArgs,
};

type Outcome = Result<(), Failure>;

pub fn run(command: Command) -> Outcome {
    match command {
        Command::Basis(a) => basis(a),
        Command::Compose(a) => compose_cmd(a),
        Command::Haar(a) => haar(a),
        Command::Volume(a) => volume(a),
        Command::Rho(a) => rho(a),
        Command::Check(a) => check(a),
        Command::Scan(a) => scan(a),
    }
}

fn emit(text: String) -> Outcome {
    let mut out = io::stdout().lock();
    out.write_all(text.as_bytes())?;
    out.flush()?;
    Ok(())
}

fn text_or_json(format: Format, command: &str) -> Result<bool, Failure> {
    match format {
        Format::Text => Ok(false),
        Format::Json => Ok(true),
        Format::Csv => Err(Failure::Usage(format!(
            "`{command}` prints text or json; csv is only available for `scan`"
        ))),
    }
}

fn angles_for(group: Group, src: &str) -> Result<EulerAngles, Failure> {
    let values = expr::parse_list(src).map_err(Failure::Usage)?;
    Ok(EulerAngles::new(group, values)?)
}

fn theta_from(src: &str) -> Result<SpectrumAngles, Failure> {
    let profile = spectrum_profile();
    let pick = |f: fn(&su4euler::Interval) -> f64| {
        SpectrumAngles::new(f(&profile[0]), f(&profile[1]), f(&profile[2]))
    };
    match src.trim() {
        "lower" => Ok(pick(|i| i.lo)),
        "upper" => Ok(pick(|i| i.hi)),
        other => match expr::parse_list(other).map_err(Failure::Usage)?[..] {
            [a, b, t] => Ok(SpectrumAngles::new(a, b, t)),
            ref v => Err(Failure::Usage(format!(
                "--theta needs three angles or lower/upper (got {})",
                v.len()
            ))),
        },
    }
}

/// ρ from the state flags; twelve angles conjugate by the short chain,
/// fifteen by the full element.
fn state(args: &StateArgs) -> Result<(Vec<f64>, SpectrumAngles, DensityMatrix), Failure> {
    let Some(src) = &args.angles else {
        return Err(Failure::Usage("--angles is required".into()));
    };
    let values = expr::parse_list(src).map_err(Failure::Usage)?;
    let theta = theta_from(&args.theta)?;
    let rho = match values.len() {
        12 => rho_full(values.as_slice().try_into().unwrap(), &theta),
        15 => {
            let all = EulerAngles::new(Group::Su4, values.clone())?;
            rho_su4(&all.as_su4().expect("fifteen angles"), &theta)
        }
        n => {
            return Err(Failure::Usage(format!(
                "--angles needs 12 or 15 values (got {n})"
            )))
        }
    };
    Ok((values, theta, rho))
}

fn basis(a: BasisArgs) -> Outcome {
    let json = text_or_json(a.format, "basis")?;
    if a.structure {
        let f = structure_constants()?;
        if json {
            let entries: Vec<_> = f
                .nonzero()
                .map(|(i, j, k, v)| json!({ "i": i, "j": j, "k": k, "f": v }))
                .collect();
            return emit(envelope("basis", json!({ "structure": true }), entries));
        }
        let mut out = String::new();
        for (i, j, k, v) in f.nonzero() {
            out.push_str(&format!("f({i},{j},{k}) = {}\n", num(v)));
        }
        return emit(out);
    }
    let indices: Vec<usize> = match a.index {
        Some(i) => vec![i],
        None => (1..=15).collect(),
    };
    let mut mats = Vec::new();
    for &i in &indices {
        mats.push((i, *gell_mann(i)?.matrix()));
    }
    if json {
        let payload: Vec<_> = mats
            .iter()
            .map(|(i, m)| json!({ "index": i, "matrix": matrix_json(m) }))
            .collect();
        return emit(envelope("basis", json!({ "index": a.index }), payload));
    }
    let mut out = String::new();
    for (i, m) in &mats {
        out.push_str(&format!("lambda{i} =\n{}", matrix_text(m)));
    }
    emit(out)
}

fn compose_cmd(a: ComposeArgs) -> Outcome {
    let json = text_or_json(a.format, "compose")?;
    let angles = angles_for(a.group.into(), &a.angles.angles)?;
    let u = compose(&angles);
    if json {
        return emit(envelope(
            "compose",
            json!({ "group": angles.group(), "angles": angles.values() }),
            json!({
                "matrix": matrix_json(u.matrix()),
                "unitarity_error": u.unitarity_error(),
                "determinant_error": u.determinant_error(),
            }),
        ));
    }
    emit(format!(
        "group = {}\nangles = {}\nU =\n{}unitarity_error = {}\ndeterminant_error = {}\n",
        angles.group(),
        list(angles.values()),
        matrix_text(u.matrix()),
        num(u.unitarity_error()),
        num(u.determinant_error()),
    ))
}

fn haar(a: HaarArgs) -> Outcome {
    let json = text_or_json(a.format, "haar")?;
    let angles = angles_for(a.group.into(), &a.angles.angles)?;
    let v = angles.values();
    let c = match angles.group() {
        Group::Su2 => one_form_matrix_su2(v.try_into().unwrap())?,
        Group::Su3 => one_form_matrix_su3(v.try_into().unwrap())?,
        Group::Su4 => one_form_matrix(v.try_into().unwrap())?,
    };
    let closed = density(&angles);
    let det = c.determinant().abs();
    let rel = if closed == 0.0 {
        det
    } else {
        (det - closed).abs() / closed
    };
    if json {
        return emit(envelope(
            "haar",
            json!({ "group": angles.group(), "angles": v }),
            json!({ "density": closed, "abs_det_one_form": det, "relative_difference": rel }),
        ));
    }
    emit(format!(
        "group = {}\nangles = {}\ndensity = {}\nabs_det_one_form = {}\nrelative_difference = {}\n",
        angles.group(),
        list(v),
        num(closed),
        num(det),
        num(rel),
    ))
}

fn volume(a: VolumeArgs) -> Outcome {
    let json = text_or_json(a.format, "volume")?;
    let group: Group = a.group.into();
    let kind: RangeKind = a.profile.into();
    let (method, resolution) = match a.method {
        MethodArg::Quad => (VolumeMethod::Quadrature, a.nodes),
        MethodArg::Mc => (VolumeMethod::MonteCarlo, a.samples),
    };
    let r = group_volume_over(group, kind, method, resolution, a.seed)?;
    let target = analytic_volume(group);
    let rel = (r.estimate - target) / target;
    if json {
        return emit(envelope(
            "volume",
            json!({
                "group": group,
                "method": method,
                "profile": kind,
                "resolution": resolution,
                "seed": a.seed,
            }),
            json!({ "result": r, "analytic": target, "relative_error": rel }),
        ));
    }
    let mut out = format!(
        "group = {group}\nmethod = {}\nprofile = {}\n",
        match method {
            VolumeMethod::Quadrature => "quadrature",
            VolumeMethod::MonteCarlo => "monte_carlo",
        },
        match kind {
            RangeKind::Volume => "volume",
            RangeKind::Covering => "covering",
        },
    );
    match method {
        VolumeMethod::Quadrature => out.push_str(&format!("nodes = {resolution}\n")),
        VolumeMethod::MonteCarlo => {
            out.push_str(&format!("samples = {resolution}\nseed = {}\n", a.seed))
        }
    }
    out.push_str(&format!(
        "normalization = {}\nestimate = {}\nanalytic = {}\nrelative_error = {}\n",
        r.normalization,
        num(r.estimate),
        num(target),
        num(rel),
    ));
    if method == VolumeMethod::MonteCarlo {
        out.push_str(&format!("standard_error = {}\n", num(r.standard_error)));
    }
    emit(out)
}

fn rho(a: RhoArgs) -> Outcome {
    let json = text_or_json(a.format, "rho")?;
    let (angles, theta, rho) = state(&a.state)?;
    let eig = rho.eigenvalues();
    let spectrum = theta.spectrum();
    let b = bloch_coefficients(&theta)?;
    if json {
        return emit(envelope(
            "rho",
            json!({ "angles": angles, "theta": theta }),
            json!({
                "rho": matrix_json(rho.matrix()),
                "eigenvalues": eig,
                "diagonal": spectrum,
                "bloch": b,
            }),
        ));
    }
    emit(format!(
        "angles = {}\ntheta = {}\nrho =\n{}eigenvalues = {}\ndiagonal = {}\nbloch = w0 {}, w3 {}, w8 {}, w15 {}\n",
        list(&angles),
        list(&theta.to_array()),
        matrix_text(rho.matrix()),
        list(&eig),
        list(&spectrum),
        num(b.w0),
        num(b.w3),
        num(b.w8),
        num(b.w15),
    ))
}

fn read_matrix(path: &std::path::Path) -> Result<Mat4, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Io(format!("cannot read {}: {e}", path.display())))?;
    let rows: Vec<&str> = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .collect();
    if rows.len() != 4 {
        return Err(Failure::Validation(format!(
            "matrix file needs 4 rows, found {}",
            rows.len()
        )));
    }
    let mut m = Mat4::zeros();
    for (i, row) in rows.iter().enumerate() {
        let v = expr::parse_list(row)
            .map_err(|e| Failure::Validation(format!("row {}: {e}", i + 1)))?;
        if v.len() != 8 {
            return Err(Failure::Validation(format!(
                "row {} needs 8 reals (re im pairs), found {}",
                i + 1,
                v.len()
            )));
        }
        for j in 0..4 {
            m[(i, j)] = su4euler::linalg::Complex64::new(v[2 * j], v[2 * j + 1]);
        }
    }
    Ok(m)
}

fn check(a: CheckArgs) -> Outcome {
    let json = text_or_json(a.format, "check")?;
    let subsystem: Subsystem = a.subsystem.into();
    let (source, rho, angles, theta) = match &a.matrix {
        Some(path) => {
            let rho = DensityMatrix::new(read_matrix(path)?)?;
            ("matrix", rho, None, None)
        }
        None => {
            let (angles, theta, rho) = state(&a.state)?;
            ("angles", rho, Some(angles), Some(theta))
        }
    };
    let v = classify(&rho, subsystem, a.tolerance)?;
    let pt = partial_transpose(rho.matrix(), subsystem);
    let eig = hermitian_eigenvalues(&pt);
    let resolvent = eigenvalues_via_resolvent(&depressed_quartic(&char_poly_coeffs(&pt))?);
    if json {
        return emit(envelope(
            "check",
            json!({
                "source": source,
                "matrix": a.matrix.as_ref().map(|p| p.display().to_string()),
                "angles": angles,
                "theta": theta,
                "tolerance": a.tolerance,
                "subsystem": subsystem,
            }),
            json!({
                "verdict": v.label(),
                "verdict_detail": v,
                "pt_eigenvalues": eig,
                "resolvent_eigenvalues": resolvent,
            }),
        ));
    }
    let resolvent = match resolvent {
        Some(r) => list(&r),
        None => "branch invalid".into(),
    };
    emit(format!(
        "source = {source}\nsubsystem = {}\ntolerance = {}\nd = {}\nmin_eigenvalue = {}\nnegative_count = {}\nverdict = {}\nboundary = {}\npt_eigenvalues = {}\nresolvent_eigenvalues = {resolvent}\n",
        match subsystem {
            Subsystem::A => "A",
            Subsystem::B => "B",
        },
        num(a.tolerance),
        num(v.d_value),
        num(v.min_eigenvalue),
        v.negative_count,
        v.label(),
        v.boundary,
        list(&eig),
    ))
}

const CSV_HEADER: [&str; 21] = [
    "sample_index",
    "alpha1",
    "alpha2",
    "alpha3",
    "alpha4",
    "alpha5",
    "alpha6",
    "alpha7",
    "alpha8",
    "alpha9",
    "alpha10",
    "alpha11",
    "alpha12",
    "theta1",
    "theta2",
    "theta3",
    "d",
    "min_eig",
    "neg_count",
    "verdict",
    "boundary",
];

fn csv_row(r: &ScanRecord) -> Vec<String> {
    let mut row = Vec::with_capacity(CSV_HEADER.len());
    row.push(r.sample_index.to_string());
    row.extend(r.alpha.iter().chain(&r.theta).map(|&x| num(x)));
    row.push(num(r.d));
    row.push(num(r.min_eig));
    row.push(r.neg_count.to_string());
    row.push(r.verdict_label().to_string());
    row.push(r.boundary.to_string());
    row
}

fn summary_line(s: &ScanSummary) -> String {
    format!(
        "# summary: total={} separable={} entangled={} boundary={} max_neg_count={}\n",
        s.total, s.separable, s.entangled, s.boundary, s.max_neg_count
    )
}

fn csv_err(e: csv::Error) -> Failure {
    Failure::Io(e.to_string())
}

fn scan(a: ScanArgs) -> Outcome {
    if a.format == Format::Text {
        return Err(Failure::Usage("`scan` writes csv or json".into()));
    }
    let spectrum = match &a.theta {
        Some(t) => SpectrumPolicy::Fixed(theta_from(t)?),
        None => SpectrumPolicy::UniformInProfile,
    };
    let subsystem: Subsystem = a.subsystem.into();
    let kind: RangeKind = a.profile.into();
    let config = ScanConfig {
        samples: a.samples,
        seed: a.seed,
        angle_profile: kind,
        spectrum,
        tolerance: a.tolerance,
        subsystem,
    };
    // validate before touching the output path
    if !a.corners && a.samples == 0 {
        return Err(Failure::Usage("scan needs at least one sample".into()));
    }
    if !(a.tolerance.is_finite() && a.tolerance >= 0.0) {
        return Err(Failure::Usage(format!(
            "tolerance must be finite and nonnegative (got {})",
            a.tolerance
        )));
    }

    let sink: Box<dyn Write> = match &a.output {
        Some(path) => Box::new(
            File::create(path)
                .map_err(|e| Failure::Io(format!("cannot create {}: {e}", path.display())))?,
        ),
        None => Box::new(io::stdout().lock()),
    };
    let mut sink = BufWriter::new(sink);

    let config_json = json!({
        "mode": if a.corners { "corners" } else { "random" },
        "samples": if a.corners { CORNER_COUNT } else { a.samples },
        "seed": a.seed,
        "tolerance": a.tolerance,
        "profile": kind,
        "subsystem": subsystem,
        "spectrum": match spectrum {
            SpectrumPolicy::UniformInProfile => json!("uniform"),
            SpectrumPolicy::Fixed(t) => json!(t.to_array()),
        },
    });

    let each = |f: &mut dyn FnMut(&ScanRecord) -> Result<(), Failure>| {
        if a.corners {
            scan_corners_for_each(kind, subsystem, a.tolerance, f)
        } else {
            scan_for_each(&config, f)
        }
    };

    let summary = match a.format {
        Format::Csv => {
            let mut w = csv::WriterBuilder::new()
                .terminator(csv::Terminator::Any(b'\n'))
                .from_writer(&mut sink);
            w.write_record(CSV_HEADER).map_err(csv_err)?;
            let summary = each(&mut |r| w.write_record(csv_row(r)).map_err(csv_err))??;
            w.flush()?;
            drop(w);
            sink.write_all(summary_line(&summary).as_bytes())?;
            summary
        }
        Format::Json => {
            write!(
                sink,
                "{{\"command\":\"scan\",\"version\":{},\"config\":{},\"payload\":{{\"records\":[",
                serde_json::to_string(crate::output::VERSION).unwrap(),
                config_json
            )?;
            let mut first = true;
            let summary = each(&mut |r| {
                if !first {
                    sink.write_all(b",")?;
                }
                first = false;
                serde_json::to_writer(&mut sink, r).map_err(|e| Failure::Io(e.to_string()))
            })??;
            writeln!(
                sink,
                "],\"summary\":{}}}}}",
                serde_json::to_string(&summary).unwrap()
            )?;
            summary
        }
        Format::Text => unreachable!(),
    };
    sink.flush()?;
    drop(sink);
    if a.output.is_some() {
        emit(summary_line(&summary))?;
    }
    Ok(())
}
