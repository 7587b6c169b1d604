mod common;

use std::collections::BTreeMap;

use common::brute_force_bh;
use eods::odeb::FullResponseSummary;
use eods::screen::{bh_adjust, screen_biomarkers, select_extremes};
use eods::sum::sample_variance;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

fn normals(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| StandardNormal.sample(rng)).collect()
}

#[test]
fn bh_matches_brute_force_on_random_vectors() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..1000 {
        let m = rng.random_range(1..60);
        let p: Vec<f64> = (0..m)
            .map(|_| {
                // mix in exact ties and boundary values
                match rng.random_range(0..10) {
                    0 => 1.0,
                    1 => 0.0,
                    2 => 0.05,
                    _ => rng.random::<f64>().powi(3),
                }
            })
            .collect();
        let q = bh_adjust(&p).unwrap();
        let oracle = brute_force_bh(&p);
        for (a, b) in q.iter().zip(&oracle) {
            assert!((a - b).abs() <= 1e-15 * b.max(1.0), "{p:?}");
        }
    }
}

#[test]
fn bh_is_not_a_projection() {
    let q = bh_adjust(&[0.01, 0.5]).unwrap();
    assert_eq!(q, vec![0.02, 0.5]);
    assert_eq!(bh_adjust(&q).unwrap(), vec![0.04, 0.5]);
    // all-equal inputs are fixed points
    assert_eq!(bh_adjust(&[0.3; 4]).unwrap(), vec![0.3; 4]);
}

#[test]
fn bh_rejects_out_of_range() {
    assert!(bh_adjust(&[0.1, 1.2]).is_err());
    assert!(bh_adjust(&[-0.1]).is_err());
    assert!(bh_adjust(&[f64::NAN]).is_err());
}

#[test]
fn duplicate_columns_give_identical_rows() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let full_y = normals(&mut rng, 200);
    let idx = select_extremes(&full_y, 0.2).unwrap().indices();
    let ys: Vec<f64> = idx.iter().map(|&i| full_y[i]).collect();
    let x: Vec<f64> = ys.iter().map(|y| 0.3 * y + Distribution::<f64>::sample(&StandardNormal, &mut rng)).collect();
    let table = BTreeMap::from([("a".to_string(), x.clone()), ("b".to_string(), x)]);
    let full = FullResponseSummary::from_responses(&full_y).unwrap();
    let rows = screen_biomarkers(&table, &ys, &full, 0.95, false).unwrap();
    assert_eq!((rows[0].biomarker_id.as_str(), rows[1].biomarker_id.as_str()), ("a", "b"));
    assert_eq!(rows[0].estimate, rows[1].estimate);
    assert_eq!(rows[0].p_value, rows[1].p_value);
    assert_eq!(rows[0].q_value, rows[1].q_value);
    assert_eq!((rows[0].rank, rows[1].rank), (1, 2));
}

#[test]
fn null_screen_rarely_discovers() {
    let (n_full, gamma, m, reps) = (440, 0.2, 13, 2000);
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let mut any_discovery = 0usize;
    let mut raw_hits = 0usize;
    for _ in 0..reps {
        let full_y = normals(&mut rng, n_full);
        let idx = select_extremes(&full_y, gamma).unwrap().indices();
        assert_eq!(idx.len(), 88);
        let ys: Vec<f64> = idx.iter().map(|&i| full_y[i]).collect();
        let table: BTreeMap<String, Vec<f64>> =
            (0..m).map(|j| (format!("b{j:02}"), normals(&mut rng, ys.len()))).collect();
        let full = FullResponseSummary::from_responses(&full_y).unwrap();
        let rows = screen_biomarkers(&table, &ys, &full, 0.95, false).unwrap();
        raw_hits += rows.iter().filter(|r| r.p_value < 0.05).count();
        if rows.iter().any(|r| r.q_value < 0.05) {
            any_discovery += 1;
        }
    }
    let fwer = any_discovery as f64 / reps as f64;
    let raw_per_run = raw_hits as f64 / reps as f64;
    assert!(fwer <= 0.07, "P(any BH discovery) = {fwer}");
    assert!((raw_per_run - 0.65).abs() < 0.1, "raw hits per run {raw_per_run}");
}

proptest! {
    #[test]
    fn selected_multiset_is_permutation_invariant(
        values in prop::collection::vec(-5i32..5, 10..80),
        gamma in 0.1f64..0.9,
        seed in any::<u64>(),
    ) {
        let y: Vec<f64> = values.iter().map(|&v| v as f64).collect();
        prop_assume!(((gamma * y.len() as f64).round() as usize) >= 3);
        let mut shuffled = y.clone();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for i in (1..shuffled.len()).rev() {
            shuffled.swap(i, rng.random_range(0..=i));
        }
        let pick = |v: &[f64]| {
            let mut s: Vec<f64> = select_extremes(v, gamma).unwrap().indices().iter().map(|&i| v[i]).collect();
            s.sort_by(f64::total_cmp);
            s
        };
        prop_assert_eq!(pick(&y), pick(&shuffled));
    }

    #[test]
    fn selected_variance_exceeds_full_variance(
        y in prop::collection::vec(-100.0f64..100.0, 10..200),
        gamma in 0.05f64..0.95,
    ) {
        let n_s = (gamma * y.len() as f64).round() as usize;
        prop_assume!(n_s >= 3 && n_s < y.len());
        let plan = select_extremes(&y, gamma).unwrap();
        let sub: Vec<f64> = plan.indices().iter().map(|&i| y[i]).collect();
        // compare the n-divisor variances: the tails are spread at least as widely
        let pop = |v: &[f64]| sample_variance(v) * (v.len() - 1) as f64 / v.len() as f64;
        prop_assert!(pop(&sub) >= pop(&y) - 1e-9 * pop(&y));
    }

    #[test]
    fn bh_is_monotone_and_readjustment_never_lowers(p in prop::collection::vec(0.0f64..=1.0, 1..50)) {
        let q = bh_adjust(&p).unwrap();
        for i in 0..p.len() {
            prop_assert!(q[i] >= p[i] && q[i] <= 1.0);
            for j in 0..p.len() {
                if p[i] <= p[j] {
                    prop_assert!(q[i] <= q[j]);
                }
            }
        }
        let again = bh_adjust(&q).unwrap();
        prop_assert!(again.iter().zip(&q).all(|(a, b)| a >= b));
    }
}
