mod common;

use common::{conv, synthetic_scene, Rng};
use gfd_core::bench::{
    bsnr, degrade, degrade_with, isnr, parse_grid, rho_sweep, run_scenarios, write_rho_sweep_csv,
    write_scenarios_csv, write_trace_csv, GaussianNoise, Method, PsfSpec, ReferenceTable, Scenario, PRNG_ID,
    SCENARIO3_SIGMA_SQ,
};
use gfd_core::{run_gfd, GfdConfig, Image, Psf};

#[test]
fn scenario_kernels_match_direct_formulas() {
    let s1: Psf<f64> = Scenario::builtin(1).unwrap().psf.build().unwrap();
    let raw: Vec<f64> = (-7i32..=7)
        .flat_map(|i| (-7i32..=7).map(move |j| 1.0 / (1.0 + (i * i + j * j) as f64)))
        .collect();
    let total: f64 = raw.iter().sum();
    assert_eq!((s1.kheight(), s1.kwidth()), (15, 15));
    for (a, b) in s1.taps().iter().zip(&raw) {
        assert!((a - b / total).abs() < 1e-12);
    }

    let s4: Psf<f64> = Scenario::builtin(4).unwrap().psf.build().unwrap();
    let k = [1.0, 4.0, 6.0, 4.0, 1.0];
    for i in 0..5 {
        for j in 0..5 {
            assert!((s4.tap(i, j) - k[i] * k[j] / 256.0).abs() < 1e-15);
        }
    }

    let s5: Psf<f64> = Scenario::builtin(5).unwrap().psf.build().unwrap();
    let raw: Vec<f64> = (-12i32..=12)
        .flat_map(|i| (-12i32..=12).map(move |j| (-((i * i + j * j) as f64) / (2.0 * 1.6 * 1.6)).exp()))
        .collect();
    let total: f64 = raw.iter().sum();
    for (a, b) in s5.taps().iter().zip(&raw) {
        assert!((a - b / total).abs() < 1e-12);
    }

    let s3: Psf<f64> = Scenario::builtin(3).unwrap().psf.build().unwrap();
    assert!(s3.taps().iter().all(|&t| (t - 1.0 / 81.0).abs() < 1e-15));
}

#[test]
fn scenario_noise_levels() {
    let want = [2.0, 8.0, SCENARIO3_SIGMA_SQ, 49.0, 4.0];
    for (id, v) in (1..=5).zip(want) {
        assert_eq!(Scenario::builtin(id).unwrap().sigma_sq, v);
    }
    assert!(Scenario::builtin(0).is_err() && Scenario::builtin(6).is_err());
    assert_eq!(
        Scenario::builtin(4).unwrap().psf.describe(),
        "[1 4 6 4 1]ᵀ[1 4 6 4 1]/256"
    );
}

#[test]
fn published_table_spot_checks() {
    let t = ReferenceTable::published();
    let cells = [
        ("cameraman", 3, Method::Gfd, 9.73),
        ("cameraman", 3, Method::ApeAdmm, 8.56),
        ("lena", 1, Method::Gfd, 8.12),
        ("lena", 1, Method::ApeAdmm, 6.36),
        ("house", 5, Method::Gfd, 5.39),
        ("house", 2, Method::Bm3dDeb, 8.14),
        ("man", 3, Method::Gfd, 7.67),
        ("man", 1, Method::Forward, 5.15),
    ];
    for (img, s, m, v) in cells {
        assert_eq!(t.isnr(img, s, m), Some(v), "{img} {s} {m:?}");
    }
    assert_eq!(t.bsnr("cameraman", 3), Some(40.00));
    assert_eq!(t.bsnr("house", 4), Some(15.99));
    assert_eq!(t.bsnr("lena", 5), Some(27.18));
}

#[test]
fn degraded_noise_has_requested_moments() {
    let clean = synthetic_scene(128);
    let psf = Psf::new(3, 3, vec![1.0; 9]).unwrap();
    let mut means = Vec::new();
    let mut vars = Vec::new();
    for seed in 0..20 {
        let pair = degrade_with(&clean, &psf, 3.0, seed).unwrap();
        let n = pair.observed.sub(&conv(&clean, &psf)).unwrap();
        let m = n.mean();
        means.push(m);
        vars.push(n.centered_sq_norm() / (n.pixel_count() as f64 - 1.0));
    }
    let pixels: f64 = 128.0 * 128.0;
    // Standard errors: σ/√N for the mean, σ²·√(2/N) for the variance.
    for m in &means {
        assert!(m.abs() < 4.0 * 3.0 / pixels.sqrt());
    }
    for v in &vars {
        assert!((v - 9.0).abs() < 4.0 * 9.0 * (2.0 / pixels).sqrt());
    }
}

#[test]
fn degrade_is_reproducible_per_seed() {
    let clean = synthetic_scene(32);
    let scn = Scenario::builtin(2).unwrap();
    let a = degrade(&clean, &scn, 42).unwrap();
    let b = degrade(&clean, &scn, 42).unwrap();
    let c = degrade(&clean, &scn, 43).unwrap();
    assert_eq!(a, b);
    assert_ne!(a.observed, c.observed);
    assert_eq!(a.sigma, 8f64.sqrt());
    assert!(PRNG_ID.contains("chacha20"));
}

#[test]
fn gaussian_stream_is_standard_normal() {
    let mut g = GaussianNoise::new(7);
    let n = 200_000;
    let xs: Vec<f64> = (0..n).map(|_| g.next_standard()).collect();
    let mean = xs.iter().sum::<f64>() / n as f64;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n as f64;
    let within_one = xs.iter().filter(|x| x.abs() < 1.0).count() as f64 / n as f64;
    assert!(mean.abs() < 0.01);
    assert!((var - 1.0).abs() < 0.015);
    assert!((within_one - 0.6827).abs() < 0.005);
}

#[test]
fn bsnr_and_isnr_match_definitions() {
    let mut rng = Rng::new(3);
    let g = rng.image(20, 20, 0.0, 255.0);
    let m = g.data().iter().sum::<f64>() / 400.0;
    let var: f64 = g.data().iter().map(|x| (x - m).powi(2)).sum::<f64>() / 400.0;
    assert!((bsnr(&g, 2.5).unwrap() - 10.0 * (var / 2.5).log10()).abs() < 1e-10);

    let u = rng.image(20, 20, 0.0, 255.0);
    let r = rng.image(20, 20, 0.0, 255.0);
    let num: f64 = u.data().iter().zip(g.data()).map(|(a, b)| (a - b).powi(2)).sum();
    let den: f64 = u.data().iter().zip(r.data()).map(|(a, b)| (a - b).powi(2)).sum();
    assert!((isnr(&u, &g, &r).unwrap() - 10.0 * (num / den).log10()).abs() < 1e-10);
    assert_eq!(isnr(&u, &g, &u).unwrap(), f64::INFINITY);
}

#[test]
fn rho_sweep_has_one_adaptive_row() {
    let clean = synthetic_scene(32);
    let psf = Psf::new(3, 3, vec![1.0; 9]).unwrap();
    let grid = parse_grid("0.4:0.3:1.0").unwrap();
    assert_eq!(grid, vec![0.4, 0.7, 1.0]);
    let cfg = GfdConfig {
        iterations: 2,
        ..GfdConfig::default()
    };
    let rows = rho_sweep("scene", &clean, &psf, 30.0, &grid, &cfg, 1).unwrap();
    assert_eq!(rows.len(), 4);
    assert_eq!(rows.iter().filter(|r| r.adaptive).count(), 1);
    assert!(rows.iter().all(|r| r.bsnr_db == 30.0 && r.image == "scene"));
    let again = rho_sweep("scene", &clean, &psf, 30.0, &grid, &cfg, 1).unwrap();
    assert_eq!(rows, again);

    let mut csv = Vec::new();
    write_rho_sweep_csv(&mut csv, &rows).unwrap();
    let text = String::from_utf8(csv).unwrap();
    assert!(text.starts_with("image,bsnr_db,rho,adaptive_flag,isnr_db\n"));
    assert_eq!(text.lines().count(), 5);
    assert!(text.contains("scene,30,0.4,0,"));
}

#[test]
fn scenario_runs_fill_reference_columns() {
    let images = vec![("cameraman".to_string(), synthetic_scene(32)), ("custom".to_string(), synthetic_scene(32))];
    let scenarios = vec![Scenario::builtin(4).unwrap(), Scenario::builtin(3).unwrap()];
    let cfg = GfdConfig {
        iterations: 2,
        ..GfdConfig::default()
    };
    let rows = run_scenarios(&images, &scenarios, &cfg, true, 5).unwrap();
    assert_eq!(rows.len(), 4);
    assert_eq!((rows[0].image.as_str(), rows[0].scenario), ("cameraman", 3));
    assert_eq!(rows[0].ref_gfd_db, Some(9.73));
    assert_eq!(rows[3].ref_gfd_db, None);
    assert!(rows.iter().all(|r| r.secs_per_iter >= 0.0));

    let mut csv = Vec::new();
    write_scenarios_csv(&mut csv, &rows).unwrap();
    let text = String::from_utf8(csv).unwrap();
    assert!(text.starts_with("image,scenario,bsnr_db,isnr_db,ref_gfd_db,delta_db,secs_per_iter\n"));
    let custom = text.lines().find(|l| l.starts_with("custom,3,")).unwrap();
    assert_eq!(custom.split(',').nth(4), Some(""));
}

#[test]
fn trace_csv_layout() {
    let clean = synthetic_scene(24);
    let pair = degrade_with(&clean, &Psf::new(3, 3, vec![1.0; 9]).unwrap(), 1.0, 0).unwrap();
    let cfg = GfdConfig {
        iterations: 3,
        reference: Some(clean),
        ..GfdConfig::default()
    };
    let (_, trace) = run_gfd(&pair.observed, &pair.psf, &cfg).unwrap();
    let mut csv = Vec::new();
    write_trace_csv(&mut csv, &trace).unwrap();
    let text = String::from_utf8(csv).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "k,lambda,rho,residual,isnr_db");
    assert_eq!(lines.len(), 4);
    assert!(lines[1].starts_with("1,"));
    assert!(lines.iter().skip(1).all(|l| l.split(',').count() == 5));

    let cfg = GfdConfig {
        iterations: 1,
        ..GfdConfig::default()
    };
    let (_, trace) = run_gfd(&pair.observed, &pair.psf, &cfg).unwrap();
    let mut csv = Vec::new();
    write_trace_csv(&mut csv, &trace).unwrap();
    assert!(String::from_utf8(csv).unwrap().lines().nth(1).unwrap().ends_with(','));
}

#[test]
fn psf_spec_round_trips_through_text() {
    for text in ["boxcar:9", "gaussian:25:1.6", "rational:7", "binomial5"] {
        let spec: PsfSpec = text.parse().unwrap();
        assert_eq!(spec.to_string(), text);
    }
    for bad in ["boxcar:8", "gaussian:25", "disk:3", "gaussian:5:-1", ""] {
        assert!(bad.parse::<PsfSpec>().is_err(), "{bad}");
    }
}

#[test]
fn file_psf_is_read_from_pgm() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("k.pgm");
    std::fs::write(&path, b"P2 3 3 255 0 1 0 1 4 1 0 1 0").unwrap();
    let spec: PsfSpec = format!("file:{}", path.display()).parse().unwrap();
    let psf: Psf<f64> = spec.build().unwrap();
    assert!((psf.tap(1, 1) - 0.5).abs() < 1e-15);
    assert!((psf.tap(0, 1) - 0.125).abs() < 1e-15);
    let img = Image::filled(8, 8, 3.0).unwrap();
    assert!(gfd_core::circ_convolve(&img, &psf).unwrap().max_abs_diff(&img).unwrap() < 1e-12);
}
