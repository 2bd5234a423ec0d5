use bcgo::field::GridField;
use bcgo::harness::{run_row, Config};
use bcgo::recon::{assemble_hminus1, sobolev_norm, FourierEstimate, FrequencyBox, ReconOptions, Reconstructor};
use bcgo::reflection::DomainSpec;

fn small_config() -> Config {
    let mut cfg = Config::default();
    cfg.resolution.modes = 16;
    cfg.resolution.cells = 2;
    cfg.resolution.volume_nodes = 16;
    cfg.resolution.face_nodes = 16;
    cfg.schedule.k = vec![1.0];
    cfg
}

fn even_difference_grid(cfg: &Config, n: usize, half: f64) -> GridField {
    let (q1, q2) = cfg.potentials().unwrap();
    let (e1, e2) = (q1.even_extension().unwrap(), q2.even_extension().unwrap());
    GridField::from_fn(&[n; 3], &[-half; 3], &[half; 3], |x| e1.eval(x) - e2.eval(x))
}

#[test]
fn assembled_norm_tracks_direct_sobolev_norm() {
    let cfg = Config::default();
    let dom = cfg.domain_spec().unwrap();
    let (q1, q2) = cfg.potentials().unwrap();
    let rec = Reconstructor::new(&q1, &q2, &dom, &ReconOptions::default()).unwrap();
    let direct = sobolev_norm(&even_difference_grid(&cfg, 64, 1.6), -1.0);
    for rho in [8.0, 10.0] {
        let fbox = FrequencyBox::new(3, rho, 40).unwrap();
        let est: Vec<FourierEstimate> = fbox
            .nodes()
            .into_iter()
            .map(|xi| {
                let v = rec.truth(&xi).unwrap();
                FourierEstimate::from_value(xi, v)
            })
            .collect();
        let inside = assemble_hminus1(&est, &fbox, 0.0).unwrap();
        let bound = assemble_hminus1(&est, &fbox, rec.tail_constant()).unwrap();
        assert!((inside / direct - 1.0).abs() <= 0.10, "ρ = {rho}: inside {inside} vs direct {direct}");
        assert!(bound >= direct * 0.99, "ρ = {rho}: bound {bound} below direct {direct}");
    }
}

#[test]
fn tail_constant_matches_grid_parseval() {
    let cfg = Config::default();
    let dom = cfg.domain_spec().unwrap();
    let (q1, q2) = cfg.potentials().unwrap();
    let rec = Reconstructor::new(&q1, &q2, &dom, &ReconOptions::default()).unwrap();
    let grid = even_difference_grid(&cfg, 64, 1.6);
    let parseval = sobolev_norm(&grid, 0.0).powi(2);
    assert!((rec.tail_constant() / parseval - 1.0).abs() <= 0.02);
}

#[test]
fn identical_potentials_give_zero_error() {
    let mut cfg = small_config();
    cfg.potentials.q2 = cfg.potentials.q1.clone();
    let (record, estimates) = run_row(&cfg, 1.0, 1e-6).unwrap();
    assert_eq!(record.err_hminus1, 0.0);
    assert!(estimates.iter().all(|e| e.value.norm() == 0.0));
}

#[test]
fn rows_are_deterministic() {
    let cfg = small_config();
    let (a, ea) = run_row(&cfg, 1.0, 1e-3).unwrap();
    let (b, eb) = run_row(&cfg, 1.0, 1e-3).unwrap();
    assert_eq!(a.err_hminus1, b.err_hminus1);
    assert_eq!(a.schedule, b.schedule);
    assert_eq!(ea.len(), eb.len());
    for (x, y) in ea.iter().zip(&eb) {
        assert_eq!(x.value, y.value);
    }
    let mut other = cfg.clone();
    other.schedule.seed = 9;
    let (c, _) = run_row(&other, 1.0, 1e-3).unwrap();
    assert_ne!(a.err_hminus1, c.err_hminus1);
}

#[test]
fn domain_rejects_bad_geometry() {
    assert!(DomainSpec::new(3, -1.0, 1.0).is_err());
    assert!(DomainSpec::new(1, 0.5, 1.0).is_err());
}
