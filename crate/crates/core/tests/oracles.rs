use approx::assert_relative_eq;
use lohps::correlation::{g2_zero, HbtConfig};
use lohps::interference::Beta;
use lohps::oracle::{
    enumerate_output_distribution, independent_routing_distribution, monte_carlo_g2, monte_carlo_heralded, McConfig,
};
use lohps::qkd::{key_rate, source_distribution, Analysis, ChannelParams, SourceModel};
use lohps::statistics::{heralded_statistics, output_joint, HeraldConfig};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn enumeration_matches_output_joint(mu in 1e-4f64..=0.67, b in -1.0f64..=1.0) {
        let joint = enumerate_output_distribution(mu, b);
        let cfg = HeraldConfig::new(mu, 0.5, Beta::new(b).unwrap()).unwrap();
        let mut seen = 0;
        for r in 0..=3 {
            for s in 0..=3 - r {
                prop_assert!((joint.get(r, s) - output_joint(r, s, &cfg).unwrap()).abs() <= 1e-12);
                seen += 1;
            }
        }
        prop_assert_eq!(seen, 10);
        prop_assert!(joint.iter().all(|((r, s), _)| r + s <= 3));
    }
}

#[test]
fn independent_routing_matches_distinguishable_enumeration() {
    for mu in [1e-3, 0.1, 0.5] {
        let a = enumerate_output_distribution(mu, 0.0);
        let b = independent_routing_distribution(mu);
        for ((r, s), p) in a.iter() {
            assert!((p - b.get(r, s)).abs() <= 1e-12);
        }
        assert!((a.total() - b.total()).abs() <= 1e-12);
    }
}

#[test]
fn monte_carlo_reproduces_heralded_statistics() {
    let mc = McConfig::new(3_000_000, 11);
    for (mu, b, eta) in [(0.1, -1.0, 0.15), (0.3, 0.0, 0.5), (0.5, 1.0, 1.0)] {
        let exact = heralded_statistics(&HeraldConfig::new(mu, eta, Beta::new(b).unwrap()).unwrap()).unwrap();
        let est = monte_carlo_heralded(mu, b, eta, &mc).unwrap();
        assert!(
            (est.p_vacuum - exact.p_vacuum).abs() <= 4.0 * est.se_vacuum,
            "{mu} {b} {eta}"
        );
        assert!(
            (est.p_single - exact.p_single).abs() <= 4.0 * est.se_single,
            "{mu} {b} {eta}"
        );
        assert!(
            (est.p_multi - exact.p_multi).abs() <= 4.0 * est.se_multi,
            "{mu} {b} {eta}"
        );
    }
}

#[test]
fn monte_carlo_reproduces_g2() {
    // high efficiencies and μ give enough coincidences for a tight check
    let (mu, b, eta_c, eta_f, eta_g) = (0.4, -1.0, 0.8, 0.9, 0.7);
    let mc = McConfig::new(2_000_000, 3);
    let stats = heralded_statistics(&HeraldConfig::new(mu, eta_c, Beta::new(b).unwrap()).unwrap()).unwrap();
    let model = g2_zero(&stats, &HbtConfig::new(eta_f, eta_g).unwrap())
        .unwrap()
        .g2_direct;
    let est = monte_carlo_g2(mu, b, eta_c, eta_f, eta_g, &mc).unwrap();
    assert!(est.coincidences > 1000);
    assert!((est.g2 - model).abs() <= 3.0 * est.std_error, "{} vs {model}", est.g2);
    let (lo, hi) = est.confidence_interval();
    assert!(lo < est.g2 && est.g2 < hi);
}

#[test]
fn results_independent_of_thread_count() {
    let mc = McConfig {
        trials: 400_000,
        seed: 99,
        chunk_trials: 50_000,
    };
    let run = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| monte_carlo_g2(0.2, -1.0, 0.3, 0.6, 0.6, &mc).unwrap())
    };
    assert_eq!(run(1), run(4));
}

#[test]
fn chunked_streams_pool_like_a_single_stream() {
    let trials = 4_000_000;
    let single = McConfig {
        trials,
        seed: 5,
        chunk_trials: trials,
    };
    let split = McConfig {
        chunk_trials: trials / 8,
        ..single
    };
    let a = monte_carlo_heralded(0.1, -1.0, 0.15, &single).unwrap();
    let b = monte_carlo_heralded(0.1, -1.0, 0.15, &split).unwrap();
    assert_ne!(a, b);
    // σ of the difference of two independent estimates
    let sigma = (a.se_single.powi(2) + b.se_single.powi(2)).sqrt();
    assert!(
        (a.p_single - b.p_single).abs() <= sigma,
        "{} vs {}",
        a.p_single,
        b.p_single
    );
}

fn h2(x: f64) -> f64 {
    -x * x.log2() - (1.0 - x) * (1.0 - x).log2()
}

#[test]
fn faint_laser_link_by_hand_at_50_km() {
    let (mu, l): (f64, f64) = (0.005, 50.0);
    let (alpha, eta_bob, pd, e_opt, f, q, e0) = (0.21, 0.045, 0.85e-6, 0.033, 1.16, 0.5, 0.5);
    let eta = eta_bob * 10f64.powf(-alpha * l / 10.0);
    let p = [(-mu).exp(), mu * (-mu).exp(), 1.0 - (-mu).exp() * (1.0 + mu)];
    let mut q_mu = 0.0;
    let mut eq = 0.0;
    for (i, pi) in p.iter().enumerate() {
        let eta_i = 1.0 - (1.0 - eta).powi(i as i32);
        let y = pd + eta_i;
        q_mu += pi * y;
        eq += pi * (e0 * pd + e_opt * eta_i);
    }
    let e_mu = eq / q_mu;

    let q1 = q_mu - p[2];
    let e1 = e_mu * q_mu / q1;
    assert!(q1 > 0.0 && e1 < 0.5);
    let gllp = q * (q1 * (1.0 - h2(e1)) - q_mu * f * h2(e_mu));

    let y1 = pd + eta;
    let q1d = p[1] * y1;
    let e1d = (e0 * pd + e_opt * eta) / y1;
    let decoy = q * (q1d * (1.0 - h2(e1d)) - q_mu * f * h2(e_mu));

    let dist = source_distribution(&SourceModel::FaintLaser { mu }).unwrap();
    let channel = ChannelParams::default();
    let g = key_rate(&dist, &channel, l, Analysis::Gllp).unwrap();
    let d = key_rate(&dist, &channel, l, Analysis::Decoy).unwrap();
    assert_relative_eq!(g.q_mu, q_mu, max_relative = 1e-12);
    assert_relative_eq!(g.e_mu, e_mu, max_relative = 1e-12);
    assert_relative_eq!(g.q1, q1, max_relative = 1e-9);
    assert_relative_eq!(g.raw_rate, gllp, max_relative = 1e-9);
    assert_eq!(g.rate, gllp.max(0.0));
    assert_relative_eq!(d.q1, q1d, max_relative = 1e-12);
    assert_relative_eq!(d.e1, e1d, max_relative = 1e-12);
    assert!(decoy > 0.0);
    assert_relative_eq!(d.rate, decoy, max_relative = 1e-9);
}
