use std::fs;

use dimer_qc::sweep::{
    emit_surface, parse_axis, parse_measures, read_surface_csv, read_sweep_csv, run_sweep, write_surface_csv, write_sweep_csv,
    Measure, Method, SweepRow, SweepSpec, SURFACE_HEADER, SWEEP_HEADER,
};
use dimer_qc::OptimizerConfig;

fn csv_bytes(rows: &[SweepRow]) -> Vec<u8> {
    let mut out = Vec::new();
    write_sweep_csv(rows, &mut out).unwrap();
    out
}

fn quick_oracle() -> OptimizerConfig {
    OptimizerConfig {
        grid_theta: 16,
        grid_phi: 32,
        ..OptimizerConfig::default()
    }
}

#[test]
fn infinite_temperature_rows_are_zero() {
    let spec = SweepSpec::new(vec![0.0], vec![0.0, 0.5, 1.0]);
    let rows = run_sweep(&spec, 0).unwrap();
    assert_eq!(rows.len(), 3);
    for row in &rows {
        for m in Measure::ALL {
            for oracle in [false, true] {
                assert!(row.value(m, oracle).unwrap().abs() < 1e-15, "{m} oracle={oracle}: {row:?}");
            }
        }
    }
}

#[test]
fn rows_are_beta_major() {
    let mut spec = SweepSpec::new(vec![1.0, 2.0], vec![0.0, 0.5, 1.0]);
    spec.method = Method::Closed;
    let rows = run_sweep(&spec, 0).unwrap();
    let order: Vec<(f64, f64)> = rows.iter().map(|r| (r.beta, r.epsilon)).collect();
    assert_eq!(order, [(1.0, 0.0), (1.0, 0.5), (1.0, 1.0), (2.0, 0.0), (2.0, 0.5), (2.0, 1.0)]);
}

#[test]
fn deltas_are_absolute_differences() {
    let mut spec = SweepSpec::new(vec![2.0], vec![0.3]);
    spec.oracle_config = quick_oracle();
    let row = run_sweep(&spec, 0).unwrap().remove(0);
    assert_eq!(row.delta_qd, Some((row.qd_closed.unwrap() - row.qd_oracle.unwrap()).abs()));
    assert_eq!(row.delta_gqd, Some((row.gqd_closed.unwrap() - row.gqd_oracle.unwrap()).abs()));
    assert_eq!(row.delta_min, Some((row.min_closed.unwrap() - row.min_oracle.unwrap()).abs()));
}

#[test]
fn unselected_measures_are_empty_fields() {
    let mut spec = SweepSpec::new(vec![1.0], vec![0.5]);
    spec.measures = parse_measures("gqd").unwrap();
    spec.method = Method::Closed;
    let rows = run_sweep(&spec, 0).unwrap();
    let text = String::from_utf8(csv_bytes(&rows)).unwrap();
    let line = text.lines().nth(1).unwrap();
    let fields: Vec<&str> = line.split(',').collect();
    assert_eq!(fields.len(), SWEEP_HEADER.len());
    let filled: Vec<&str> = SWEEP_HEADER.iter().zip(&fields).filter(|(_, f)| !f.is_empty()).map(|(h, _)| *h).collect();
    assert_eq!(filled, ["beta", "epsilon", "gqd_closed"]);
}

#[test]
fn csv_format_and_round_trip() {
    let mut spec = SweepSpec::new(parse_axis("0.5:3:4").unwrap(), vec![0.0, 0.37, 1.0]);
    spec.oracle_config = quick_oracle();
    let rows = run_sweep(&spec, 0).unwrap();
    let bytes = csv_bytes(&rows);
    let text = std::str::from_utf8(&bytes).unwrap();
    assert!(!text.contains('\r'));
    assert!(text.ends_with('\n'));
    assert_eq!(text.lines().next().unwrap(), SWEEP_HEADER.join(","));
    for field in text.lines().skip(1).flat_map(|l| l.split(',')).filter(|f| !f.is_empty()) {
        let mantissa = field.split('e').next().unwrap().trim_start_matches('-').replace('.', "");
        assert_eq!(mantissa.len(), 12, "{field}");
    }

    let parsed = read_sweep_csv(&bytes[..]).unwrap();
    let rounded: Vec<SweepRow> = rows.iter().map(SweepRow::rounded).collect();
    assert_eq!(parsed, rounded);
    // Writing what was read gives the same bytes back.
    assert_eq!(csv_bytes(&parsed), bytes);
}

#[test]
fn output_file_matches_in_memory_rendering() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sweep.csv");
    let mut spec = SweepSpec::new(vec![1.0, 4.0], vec![0.2, 0.8]);
    spec.method = Method::Closed;
    spec.output_path = Some(path.clone());
    let rows = run_sweep(&spec, 0).unwrap();
    assert_eq!(fs::read(&path).unwrap(), csv_bytes(&rows));
}

#[test]
fn unwritable_output_is_an_io_error() {
    let dir = tempfile::tempdir().unwrap();
    let mut spec = SweepSpec::new(vec![1.0], vec![0.5]);
    spec.method = Method::Closed;
    spec.output_path = Some(dir.path().join("missing").join("out.csv"));
    assert!(matches!(run_sweep(&spec, 0), Err(dimer_qc::Error::Io(_))));
}

#[test]
fn invalid_specs_are_rejected() {
    assert!(parse_measures("qd,entanglement").is_err());
    assert!("sometimes".parse::<Method>().is_err());
    assert!(run_sweep(&SweepSpec::new(vec![], vec![0.5]), 0).is_err());
    assert!(run_sweep(&SweepSpec::new(vec![-1.0], vec![0.5]), 0).is_err());
    assert!(run_sweep(&SweepSpec::new(vec![1.0], vec![1.5]), 0).is_err());
}

#[test]
fn worker_count_does_not_change_bytes() {
    let mut spec = SweepSpec::new(parse_axis("0:6:4").unwrap(), parse_axis("0:1:5").unwrap());
    spec.oracle_config = quick_oracle();
    let one = csv_bytes(&run_sweep(&spec, 1).unwrap());
    for workers in [2, 3, 8] {
        assert_eq!(csv_bytes(&run_sweep(&spec, workers).unwrap()), one, "workers = {workers}");
    }
}

fn closed_curve(betas: &[f64], epss: &[f64]) -> Vec<SweepRow> {
    let mut spec = SweepSpec::new(betas.to_vec(), epss.to_vec());
    spec.method = Method::Closed;
    run_sweep(&spec, 0).unwrap()
}

#[test]
fn correlations_grow_with_beta() {
    let betas = parse_axis("0.1:7:70").unwrap();
    for eps in [0.1, 0.2, 0.3, 0.5, 0.7, 0.9] {
        let rows = closed_curve(&betas, &[eps]);
        for m in Measure::ALL {
            for w in rows.windows(2) {
                let (lo, hi) = (w[0].value(m, false).unwrap(), w[1].value(m, false).unwrap());
                assert!(hi >= lo - 1e-9, "{m} at eps {eps}: {lo} -> {hi} (beta {})", w[1].beta);
            }
        }
    }
}

#[test]
fn correlations_shrink_with_epsilon() {
    let epss = parse_axis("0:1:101").unwrap();
    for beta in [1.0, 1.5, 2.0, 3.0, 5.0, 7.0] {
        let rows = closed_curve(&[beta], &epss);
        for m in Measure::ALL {
            for w in rows.windows(2) {
                let (hi, lo) = (w[0].value(m, false).unwrap(), w[1].value(m, false).unwrap());
                assert!(lo <= hi + 1e-9, "{m} at beta {beta}: {hi} -> {lo} (eps {})", w[1].epsilon);
            }
        }
    }
}

#[test]
fn surface_row_counts() {
    let mut spec = SweepSpec::new(vec![1.0, 2.0, 3.0], vec![0.1, 0.5, 0.9]);
    spec.measures = vec![Measure::Gqd];
    spec.method = Method::Closed;
    let rows = emit_surface(&spec, 0).unwrap();
    assert_eq!(rows.len(), 9);
    let mut out = Vec::new();
    write_surface_csv(&rows, &mut out).unwrap();
    assert_eq!(String::from_utf8(out.clone()).unwrap().lines().count(), 10);
    assert_eq!(read_surface_csv(&out[..]).unwrap().len(), 9);

    let mut full = SweepSpec::new(parse_axis("0:7:50").unwrap(), parse_axis("0:1:50").unwrap());
    full.method = Method::Closed;
    assert_eq!(emit_surface(&full, 0).unwrap().len(), 7500);
}

#[test]
fn surface_header_and_zero_discord_column() {
    let mut spec = SweepSpec::new(parse_axis("0.5:7:6").unwrap(), vec![0.0, 0.5, 1.0]);
    spec.oracle_config = quick_oracle();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("surface.csv");
    spec.output_path = Some(path.clone());
    let rows = emit_surface(&spec, 0).unwrap();
    let text = fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().next().unwrap(), SURFACE_HEADER.join(","));
    for r in rows.iter().filter(|r| r.epsilon == 1.0 && (r.measure.starts_with("qd") || r.measure.starts_with("gqd"))) {
        assert!(r.value.abs() < 1e-9, "{r:?}");
    }
}

#[test]
fn surface_needs_two_values_per_axis() {
    let spec = SweepSpec::new(vec![1.0], vec![0.1, 0.5]);
    assert!(emit_surface(&spec, 0).is_err());
}
