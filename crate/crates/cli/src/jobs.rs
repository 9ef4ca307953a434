//! Job implementations behind the CLI subcommands.

use std::path::{Path, PathBuf};

use serde::Deserialize;
use serde_json::json;

use herzschur::error::Error;
use herzschur::io;
use herzschur::multiplier::{b2_norm, fourier_norm, is_positive_definite, q_norm, Multiplier};
use herzschur::schur::{schur_norm, verify_certificate};
use herzschur::transforms::{average_biinvariant, convolve, cutoff_norm, restrict};
use herzschur::vn::{
    fell_absorption_defect, fourier_multiplier_op, recover_symbol, trace_change, GroupAlgebra,
};
use herzschur::Result;

use crate::report::{InequalityRow, Report};
use crate::suites;

pub fn schur_norm_job(matrix_path: &Path, tol: f64, seed: u64) -> Result<Report> {
    let text = std::fs::read_to_string(matrix_path)
        .map_err(|e| Error::Parse(format!("{}: {e}", matrix_path.display())))?;
    let matrix = io::parse_matrix(&text)?;
    let result = schur_norm(&matrix, tol)?;
    let cert = verify_certificate(&matrix, &result);
    let rows = vec![
        InequalityRow::le(
            "schur-norm",
            "certificate-verification",
            matrix_path.display().to_string(),
            if cert.pass { 0.0 } else { 1.0 },
            0.0,
            0.0,
        )
        .with_detail(cert.messages.join("; ")),
        InequalityRow::le(
            "schur-norm",
            "entrywise-lower-bound",
            matrix_path.display().to_string(),
            matrix.max_abs(),
            result.value,
            10.0 * tol,
        ),
    ];
    Ok(Report::new(
        json!({"kind": "schur-norm", "matrix": matrix_path.display().to_string(),
               "rows": matrix.rows, "cols": matrix.cols}),
        json!({
            "value": result.value,
            "lower_bound": result.lower_bound,
            "gap": result.gap,
            "iterations": result.iterations,
            "tolerance": result.tolerance,
            "method": format!("{:?}", result.method),
            "factorization_dimension": result.p_vectors.first().map(|p| p.len()).unwrap_or(0),
        }),
        rows,
        seed,
        tol,
    ))
}

/// Resolve a multiplier spec file into a multiplier; group paths are
/// taken relative to the spec file's directory.
fn load_multiplier(path: &Path) -> Result<Multiplier> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    let spec = io::parse_multiplier_spec(&text)?;
    match &spec.carrier {
        io::CarrierSpec::GroupPath(rel) => {
            let base = path.parent().unwrap_or(Path::new("."));
            let gpath = base.join(rel);
            let gtext = std::fs::read_to_string(&gpath)
                .map_err(|e| Error::Parse(format!("{}: {e}", gpath.display())))?;
            let group = io::parse_group_spec(&gtext)?;
            spec.build_on_group(&group)
        }
        io::CarrierSpec::GroupExpr(e) => {
            let group = io::parse_group_expr(e)?;
            spec.build_on_group(&group)
        }
        io::CarrierSpec::WindowExpr(w) => {
            let window = io::parse_window_expr(w)?;
            spec.build_on_window(&window)
        }
    }
}

pub fn b2_norm_job(mult_path: &Path, tol: f64, seed: u64) -> Result<Report> {
    let u = load_multiplier(mult_path)?;
    let b2 = b2_norm(&u, tol)?;
    let pd = is_positive_definite(&u, tol)?;
    let rows = vec![InequalityRow::le(
        "b2-norm",
        "entrywise-lower-bound",
        mult_path.display().to_string(),
        u.sup_norm(),
        b2.value,
        10.0 * tol,
    )];
    Ok(Report::new(
        json!({"kind": "b2-norm", "multiplier": mult_path.display().to_string()}),
        json!({
            "b2": b2.value,
            "section_lower_bound": b2.section_lower_bound,
            "sup": u.sup_norm(),
            "positive_definite": pd.positive,
            "min_eigenvalue": pd.min_eigenvalue,
            "gap": b2.schur.gap,
            "tolerance": tol,
        }),
        rows,
        seed,
        tol,
    ))
}

pub fn fourier_norm_job(mult_path: &Path, tol: f64, seed: u64) -> Result<Report> {
    let u = load_multiplier(mult_path)?;
    let a_norm = fourier_norm(&u)?;
    let b2 = b2_norm(&u, tol)?;
    let rows = vec![InequalityRow::le(
        "fourier-norm",
        "fourier-dominates-b2",
        mult_path.display().to_string(),
        b2.value,
        a_norm,
        10.0 * tol,
    )];
    Ok(Report::new(
        json!({"kind": "fourier-norm", "multiplier": mult_path.display().to_string()}),
        json!({"fourier": a_norm, "b2": b2.value, "sup": u.sup_norm(), "tolerance": tol}),
        rows,
        seed,
        tol,
    ))
}

pub fn q_norm_job(mult_path: &Path, tol: f64, seed: u64) -> Result<Report> {
    let f = load_multiplier(mult_path)?;
    let q = q_norm(&f, tol)?;
    let l1: f64 = f.values().iter().map(|z| z.norm()).sum();
    let maximizer_b2 = b2_norm(&q.maximizer, tol)?.value;
    let rows = vec![
        InequalityRow::le(
            "q-norm",
            "q-below-l1",
            mult_path.display().to_string(),
            q.value,
            l1,
            10.0 * tol,
        ),
        InequalityRow::le(
            "q-norm",
            "maximizer-in-unit-ball",
            mult_path.display().to_string(),
            maximizer_b2,
            1.0,
            10.0 * tol,
        ),
    ];
    Ok(Report::new(
        json!({"kind": "q-norm", "multiplier": mult_path.display().to_string()}),
        json!({
            "q": q.value,
            "l1": l1,
            "maximizer_b2": maximizer_b2,
            "maximizer": q.maximizer.values().iter().map(|z| io::format_complex(*z)).collect::<Vec<_>>(),
            "tolerance": tol,
        }),
        rows,
        seed,
        tol,
    ))
}

pub fn cutoff_job(window: &str, inner: usize, outer: usize, tol: f64, seed: u64) -> Result<Report> {
    let w = io::parse_window_expr(window)?;
    let res = cutoff_norm(&w, inner, outer, tol)?;
    let direct = b2_norm(&res.multiplier, tol)?;
    let rows = vec![
        InequalityRow::le(
            "cutoff",
            "cutoff-at-least-one",
            format!("{window} inner {inner} outer {outer}"),
            1.0,
            res.value,
            10.0 * tol,
        ),
        InequalityRow::eq(
            "cutoff",
            "cutoff-matches-section-norm",
            format!("{window} inner {inner} outer {outer}"),
            res.value,
            direct.value,
            1e-4 * (1.0 + direct.value),
        ),
    ];
    Ok(Report::new(
        json!({"kind": "cutoff", "window": window, "inner": inner, "outer": outer}),
        json!({
            "value": res.value,
            "iterations": res.iterations,
            "tolerance": res.tolerance,
            "window_size": w.len(),
            "optimal_u": res.multiplier.values().iter().map(|z| io::format_complex(*z)).collect::<Vec<_>>(),
        }),
        rows,
        seed,
        tol,
    ))
}

#[derive(Deserialize)]
struct PipelineConfig {
    group_expr: String,
    start: String,
    #[serde(default)]
    steps: Vec<PipelineStep>,
}

#[derive(Deserialize)]
struct PipelineStep {
    op: String,
    #[serde(default)]
    gens: Vec<String>,
}

pub fn transform_pipeline_job(config_path: &Path, tol: f64, seed: u64) -> Result<Report> {
    let text = std::fs::read_to_string(config_path)
        .map_err(|e| Error::Parse(format!("{}: {e}", config_path.display())))?;
    let config: PipelineConfig =
        serde_json::from_str(&text).map_err(|e| Error::Parse(format!("pipeline config: {e}")))?;
    let group = io::parse_group_expr(&config.group_expr)?;
    let spec_text = format!(
        "group_expr = {}\nformula = {}\n",
        config.group_expr, config.start
    );
    let spec = io::parse_multiplier_spec(&spec_text)?;
    let mut current = spec.build_on_group(&group)?;
    let mut stages = Vec::new();
    let mut rows = Vec::new();
    let record =
        |label: &str, u: &Multiplier, rows: &mut Vec<InequalityRow>| -> Result<serde_json::Value> {
            let b2 = b2_norm(u, tol)?;
            rows.push(InequalityRow::le(
                "transform-pipeline",
                "entrywise-lower-bound",
                label.to_string(),
                u.sup_norm(),
                b2.value,
                10.0 * tol,
            ));
            Ok(json!({
                "stage": label,
                "b2": b2.value,
                "sup": u.sup_norm(),
                "values": u.values().iter().map(|z| io::format_complex(*z)).collect::<Vec<_>>(),
            }))
        };
    stages.push(record("start", &current, &mut rows)?);
    let mut prev_b2 = b2_norm(&current, tol)?.value;
    for (i, step) in config.steps.iter().enumerate() {
        let label = format!("step {} ({})", i + 1, step.op);
        let contractive;
        current = match step.op.as_str() {
            "real-part" => {
                contractive = false;
                current.real_part()
            }
            "convolve-uniform" => {
                contractive = true;
                let g = current
                    .group()
                    .ok_or_else(|| Error::Parse("convolve-uniform needs a group carrier".into()))?;
                let density = vec![1.0 / g.order() as f64; g.order()];
                convolve(&density, &current)?
            }
            "average" => {
                contractive = true;
                let g = current
                    .group()
                    .ok_or_else(|| Error::Parse("average needs a group carrier".into()))?
                    .clone();
                let sub = io::subgroup_from_labels(
                    &g,
                    &step.gens.iter().map(String::as_str).collect::<Vec<_>>(),
                )?;
                average_biinvariant(&current, &sub)?
            }
            "restrict" => {
                contractive = true;
                let g = current
                    .group()
                    .ok_or_else(|| Error::Parse("restrict needs a group carrier".into()))?
                    .clone();
                let sub = io::subgroup_from_labels(
                    &g,
                    &step.gens.iter().map(String::as_str).collect::<Vec<_>>(),
                )?;
                restrict(&current, &sub)?
            }
            other => return Err(Error::Parse(format!("unknown pipeline op '{other}'"))),
        };
        let stage = record(&label, &current, &mut rows)?;
        let b2_now = stage["b2"].as_f64().unwrap_or(f64::NAN);
        if contractive {
            rows.push(InequalityRow::le(
                "transform-pipeline",
                "transform-contraction",
                label.clone(),
                b2_now,
                prev_b2,
                10.0 * tol,
            ));
        }
        prev_b2 = b2_now;
        stages.push(stage);
    }
    Ok(Report::new(
        json!({"kind": "transform-pipeline", "config": config_path.display().to_string(),
               "group": config.group_expr, "steps": config.steps.len()}),
        json!({"stages": stages}),
        rows,
        seed,
        tol,
    ))
}

pub fn vn_check_job(
    group_expr: Option<&str>,
    algebra_path: Option<&PathBuf>,
    tol: f64,
    seed: u64,
) -> Result<Report> {
    use rand::SeedableRng;
    let mut rows = Vec::new();
    let mut results = serde_json::Map::new();
    if let Some(expr) = group_expr {
        let g = io::parse_group_expr(expr)?;
        let ga = GroupAlgebra::new(&g);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        for k in 0..5 {
            let u = Multiplier::random(&g, &mut rng);
            let t = fourier_multiplier_op(&ga, &u)?;
            let back = recover_symbol(&ga, &t);
            let diff = back
                .values()
                .iter()
                .zip(u.values())
                .map(|(a, b)| (a - b).norm())
                .fold(0.0, f64::max);
            rows.push(InequalityRow::le(
                "vn-check",
                "symbol-roundtrip-exact",
                format!("{} #{k}", g.name()),
                diff,
                0.0,
                0.0,
            ));
        }
        if g.order() <= 12 {
            rows.push(InequalityRow::le(
                "vn-check",
                "fell-absorption",
                g.name().to_string(),
                fell_absorption_defect(&g),
                0.0,
                1e-12,
            ));
        }
        results.insert("center_dimension".into(), json!(ga.center_dimension()));
        results.insert("group".into(), json!(g.name()));
        results.insert("order".into(), json!(g.order()));
    }
    if let Some(path) = algebra_path {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        let algebra = io::parse_algebra_spec(&text)?;
        use rand::Rng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed ^ 0x77);
        let w2: Vec<f64> = (0..algebra.blocks().len())
            .map(|_| rng.gen_range(0.2..2.0))
            .collect();
        let tc = trace_change(&algebra, &w2, 0.5)?;
        let scaled = herzschur::vn::TracedAlgebra::new(algebra.blocks().to_vec(), w2)?;
        let h = tc.h_element(&algebra);
        let x = algebra.random(&mut rng);
        rows.push(InequalityRow::le(
            "vn-check",
            "radon-nikodym-identity",
            path.display().to_string(),
            (scaled.trace(&x) - algebra.trace(&h.mul(&x))).norm(),
            0.0,
            1e-10,
        ));
        results.insert("blocks".into(), json!(algebra.blocks()));
        results.insert("h_values".into(), json!(tc.h_values));
        results.insert("spectral_blocks".into(), json!(tc.spectral_blocks));
    }
    if rows.is_empty() {
        return Err(Error::Parse(
            "vn-check needs --group-expr and/or --algebra".into(),
        ));
    }
    Ok(Report::new(
        json!({"kind": "vn-check", "group": group_expr, "algebra": algebra_path.map(|p| p.display().to_string())}),
        serde_json::Value::Object(results),
        rows,
        seed,
        tol,
    ))
}

pub fn verify_suite_job(suite: &str, seed: u64, tol: f64, instances: usize) -> Result<Report> {
    let names: Vec<&str> = if suite == "all" {
        suites::catalog().iter().map(|e| e.name).collect()
    } else {
        vec![suite]
    };
    let mut rows = Vec::new();
    for name in &names {
        let mut suite_rows = suites::run_suite(name, seed, tol, instances)
            .ok_or_else(|| Error::Parse(format!("unknown suite '{name}'; see list-suites")))?;
        rows.append(&mut suite_rows);
    }
    Ok(Report::new(
        json!({"kind": "verify-suite", "suite": suite, "instances": instances}),
        json!({"suites_run": names, "total_rows": rows.len()}),
        rows,
        seed,
        tol,
    ))
}

pub fn list_suites_job(seed: u64, tol: f64) -> Report {
    let entries: Vec<serde_json::Value> = suites::catalog()
        .iter()
        .map(|e| {
            json!({
                "name": e.name,
                "description": e.description,
                "laws": e.laws,
            })
        })
        .collect();
    Report::new(
        json!({"kind": "list-suites"}),
        json!({"suites": entries}),
        vec![],
        seed,
        tol,
    )
}
