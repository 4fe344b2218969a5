use proptest::prelude::*;

use mmpp_rwm::diagnostics::{act_window, autocorrelation, ess, msejd, msjd, ACT_CUTOFF};
use mmpp_rwm::math::{diffusion_curve, diffusion_speed, mat_exp, mwg_efficiency_ratio, stationary_dist, SquareMatrix};
use mmpp_rwm::mmpp::{
    from_reparam, log_likelihood, log_likelihood_from, simulate, to_reparam, EventData, MmppParams, ParamVector,
};

fn generator(d: usize, rates: &[f64]) -> SquareMatrix {
    let mut q = SquareMatrix::zeros(d);
    let mut k = 0;
    for i in 0..d {
        let mut row = 0.0;
        for j in 0..d {
            if i != j {
                q.set(i, j, rates[k]);
                row += rates[k];
                k += 1;
            }
        }
        q.set(i, i, -row);
    }
    q
}

fn rates(d: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.05f64..5.0, d * (d - 1))
}

fn any_generator() -> impl Strategy<Value = SquareMatrix> {
    (2usize..=4).prop_flat_map(|d| rates(d).prop_map(move |r| generator(d, &r)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn exp_semigroup(q in any_generator(), s in 0.0f64..3.0, t in 0.0f64..3.0) {
        let lhs = mat_exp(&q, s + t).unwrap();
        let rhs = mat_exp(&q, s).unwrap().matmul(&mat_exp(&q, t).unwrap());
        prop_assert!(lhs.max_abs_diff(&rhs) <= 1e-8);
    }

    #[test]
    fn transition_rows_are_distributions(q in any_generator(), t in 0.0f64..20.0) {
        let p = mat_exp(&q, t).unwrap();
        for i in 0..p.dim() {
            prop_assert!(p.row(i).iter().all(|&v| v >= 0.0));
            prop_assert!((p.row(i).iter().sum::<f64>() - 1.0).abs() <= 1e-10);
        }
    }

    #[test]
    fn stationary_is_invariant(q in any_generator(), t in 0.0f64..100.0) {
        let nu = stationary_dist(&q).unwrap();
        let moved = mat_exp(&q, t).unwrap().left_mul_vec(nu.as_slice());
        for (a, b) in moved.iter().zip(nu.as_slice()) {
            prop_assert!((a - b).abs() <= 1e-8);
        }
    }

    #[test]
    fn efficiency_ratio_at_least_one(c in prop::collection::vec(0.01f64..100.0, 1..8)) {
        let r = mwg_efficiency_ratio(&c).unwrap();
        prop_assert!(r >= 1.0 - 1e-12);
        let all_equal = c.iter().all(|&x| x == c[0]);
        if !all_equal {
            prop_assert!(r > 1.0 + 1e-12 || c.iter().all(|&x| (x - c[0]).abs() < 1e-9 * c[0]));
        }
    }

    #[test]
    fn relabeling_leaves_likelihood_unchanged(
        psi in prop::collection::vec(0.5f64..40.0, 3),
        r in rates(3),
        perm_idx in 0usize..6,
        seed in 0u64..1000,
    ) {
        let perms = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
        let p = perms[perm_idx];
        let q = generator(3, &r);
        let params = MmppParams::new(psi.clone(), q.clone()).unwrap();
        let data = simulate(&params, 3.0, seed).unwrap().data;
        let psi_p: Vec<f64> = p.iter().map(|&i| psi[i]).collect();
        let mut q_p = SquareMatrix::zeros(3);
        for i in 0..3 {
            for j in 0..3 {
                q_p.set(i, j, q.get(p[i], p[j]));
            }
        }
        let a = log_likelihood(&params, &data).unwrap();
        let b = log_likelihood(&MmppParams::new(psi_p, q_p).unwrap(), &data).unwrap();
        prop_assert!((a - b).abs() <= 1e-10 * a.abs().max(1.0), "{a} vs {b}");
    }

    #[test]
    fn reparam_signs(psi1 in 0.1f64..50.0, gap in 0.0f64..50.0, q12 in 0.01f64..10.0, q21 in 0.01f64..10.0) {
        let theta = ParamVector(vec![psi1, psi1 + gap, q12, q21]);
        match to_reparam(&theta) {
            Ok(p) => {
                prop_assert!(gap > 0.0);
                prop_assert!(p.alpha > 0.0);
                let back = from_reparam(&p).unwrap();
                for (a, b) in theta.as_slice().iter().zip(back.as_slice()) {
                    prop_assert!((a - b).abs() <= 1e-12 * a.max(1.0));
                }
            }
            Err(_) => prop_assert!(gap == 0.0),
        }
    }

    #[test]
    fn act_lower_bound(x in prop::collection::vec(-10.0f64..10.0, 100..400)) {
        if let Ok(a) = act_window(&x) {
            prop_assert!(a.act > 0.0);
            prop_assert!(a.act >= 1.0 - 2.0 * ACT_CUTOFF * a.lag as f64);
            prop_assert!(ess(x.len(), a.act) <= x.len() as f64 || a.act < 1.0);
        }
    }

    #[test]
    fn autocorrelation_normalized(x in prop::collection::vec(-10.0f64..10.0, 100..400)) {
        if let Ok(rho) = autocorrelation(&x, x.len() / 2) {
            prop_assert_eq!(rho[0], 1.0);
            prop_assert!(rho.iter().all(|r| r.abs() <= 1.0 + 1e-12));
        }
    }

    #[test]
    fn jump_distance_invariances(
        rows in prop::collection::vec(prop::collection::vec(-5.0f64..5.0, 2), 3..50),
        shift in prop::collection::vec(-100.0f64..100.0, 2),
        a in prop::collection::vec(-3.0f64..3.0, 4),
    ) {
        let moved: Vec<Vec<f64>> = rows.iter().map(|r| vec![r[0] + shift[0], r[1] + shift[1]]).collect();
        let (m0, m1) = (msejd(&rows).unwrap(), msejd(&moved).unwrap());
        prop_assert!((m0 - m1).abs() <= 1e-8 * m0.max(1.0));

        let lin = SquareMatrix::new(2, &a).unwrap();
        let det = a[0] * a[3] - a[1] * a[2];
        prop_assume!(det.abs() > 0.1);
        let sigma = SquareMatrix::new(2, &[2.0, 0.5, 0.5, 1.0]).unwrap();
        let mapped: Vec<Vec<f64>> = rows.iter().map(|r| lin.mul_vec(r)).collect();
        let sigma_mapped = lin.matmul(&sigma).matmul(&lin.transpose());
        let (s0, s1) = (msjd(&rows, &sigma).unwrap(), msjd(&mapped, &sigma_mapped).unwrap());
        prop_assert!((s0 - s1).abs() <= 1e-8 * s0.max(1.0), "{s0} vs {s1}");
    }
}

#[test]
fn ess_equals_n_at_unit_act() {
    assert_eq!(ess(500, 1.0), 500.0);
}

#[test]
fn acceptance_decreasing_speed_unimodal() {
    let curve = diffusion_curve(1.0, 0.01, 50.0, 400).unwrap();
    assert!(curve.windows(2).all(|w| w[1].acceptance < w[0].acceptance));
    let peak = curve
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.speed.total_cmp(&b.1.speed))
        .unwrap()
        .0;
    assert!(curve[..=peak].windows(2).all(|w| w[1].speed > w[0].speed));
    assert!(curve[peak..].windows(2).all(|w| w[1].speed < w[0].speed));
    assert!((curve[peak].mu - 2.38).abs() < 0.1);
}

#[test]
fn speed_near_optimum_over_acceptance_range() {
    let best = diffusion_speed(2.38, 1.0).unwrap().speed;
    let curve = diffusion_curve(1.0, 1.0, 5.0, 4001).unwrap();
    for target in [0.2, 0.3] {
        let p = curve
            .iter()
            .min_by(|a, b| (a.acceptance - target).abs().total_cmp(&(b.acceptance - target).abs()))
            .unwrap();
        assert!(p.speed >= 0.95 * best, "acceptance {target}: speed {} vs {best}", p.speed);
    }
}

#[test]
fn slow_switching_approaches_poisson() {
    let t_obs = 2.0;
    let events: Vec<f64> = (1..=15).map(|k| k as f64 * 0.13).collect();
    let data = EventData::new(t_obs, events.clone()).unwrap();
    let psi = [3.0, 11.0];
    let params = MmppParams::from_rates(psi.to_vec(), &[1e-8, 1e-8]).unwrap();
    for (i, &rate) in psi.iter().enumerate() {
        let mut start = vec![0.0; 2];
        start[i] = 1.0;
        let ll = log_likelihood_from(&params, &data, &start).unwrap();
        let poisson = events.len() as f64 * rate.ln() - rate * t_obs;
        assert!((ll - poisson).abs() <= 1e-4 * poisson.abs(), "{ll} vs {poisson}");
    }
}

#[test]
fn simulation_is_deterministic() {
    let params = MmppParams::from_rates(vec![10.0, 17.0, 30.0], &[0.5; 6]).unwrap();
    let a = simulate(&params, 50.0, 77).unwrap();
    let b = simulate(&params, 50.0, 77).unwrap();
    assert_eq!(a.data, b.data);
    assert_ne!(a.data, simulate(&params, 50.0, 78).unwrap().data);
}
