//! Library results against brute-force reimplementations and published values.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use shiftlab::counterexamples::{gen_example313, gen_prop2_weights, menet_closed_form};
use shiftlab::density::{
    density_report, difference_set, dilate_preimage, gaps, shift_intersection, FiniteSubset,
    Origin,
};
use shiftlab::family::{family_membership, FamilyProxy, Witness};
use shiftlab::numeric::Threshold;
use shiftlab::recurrence::recurrence_scan_set;
use shiftlab::shift::{ball_contains, BallQuery, BallVerdict, FiniteVector, Space};
use shiftlab::weights::{
    criterion_set, scaled_family_check, Direction, Side, Verdict, WeightSequence,
};

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn random_set(rng: &mut ChaCha8Rng, horizon: u64, origin: Origin) -> FiniteSubset {
    let p: f64 = rng.gen_range(0.05..0.8);
    FiniteSubset::from_predicate(horizon, origin, |_| rng.gen_bool(p))
}

fn brute_window(a: &FiniteSubset, k: u64, s: u64) -> u64 {
    (k + 1..=k + s).filter(|&x| a.contains(x)).count() as u64
}

#[test]
fn window_counts_match_direct_counting() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..40 {
        let n = rng.gen_range(10..300);
        let a = random_set(&mut rng, n, Origin::One);
        let windows: Vec<u64> = [1, 2, 5, 9, n / 2, n].into_iter().filter(|&s| s >= 1).collect();
        let rep = density_report(&a, &windows).unwrap();
        for (i, &s) in windows.iter().enumerate() {
            let all: Vec<u64> = (0..=n - s).map(|k| brute_window(&a, k, s)).collect();
            assert_eq!(rep.window_max_counts[i], *all.iter().max().unwrap());
            assert_eq!(rep.window_min_counts[i], *all.iter().min().unwrap());
        }
        let c = (1..=n).filter(|&x| a.contains(x)).count() as u64;
        assert_eq!(rep.prefix_ratios.last().unwrap().count, c);
    }
}

#[test]
fn set_operations_match_definitions() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..40 {
        let n = rng.gen_range(10..200);
        let a = random_set(&mut rng, n, Origin::Zero);
        let cap = rng.gen_range(1..=n);
        let d = difference_set(&a, cap).unwrap();
        for x in 1..=cap {
            let brute = a.iter().any(|u| a.contains(u + x));
            assert_eq!(d.contains(x), brute, "difference {x}");
        }
        let (k, r) = (rng.gen_range(1..5), rng.gen_range(1..4));
        if k * r <= n {
            let m = shift_intersection(&a, k, r).unwrap();
            let brute: Vec<u64> = (0..=n - k * r)
                .filter(|&x| (0..=r).all(|i| a.contains(x + i * k)))
                .collect();
            assert_eq!(m.members(), brute.as_slice());
        }
        let l = rng.gen_range(1..6);
        let pre = dilate_preimage(&a, l).unwrap();
        let brute: Vec<u64> = (0..=n / l).filter(|&x| a.contains(l * x)).collect();
        assert_eq!(pre.members(), brute.as_slice());
    }
}

#[test]
fn gaps_tile_the_horizon() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..50 {
        let n = rng.gen_range(1..400);
        let a = random_set(&mut rng, n, Origin::One);
        if a.is_empty() {
            continue;
        }
        let g = gaps(&a);
        assert_eq!(g.iter().map(|x| x.len).sum::<u64>(), n);
        assert_eq!(g.len(), a.len() + 1);
    }
}

#[test]
fn banach_proxies_agree_with_brute_windows() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..40 {
        let n = rng.gen_range(20..300);
        let a = random_set(&mut rng, n, Origin::One);
        let s = rng.gen_range(1..=n / 2);
        let delta: f64 = rng.gen_range(0.0..1.0);
        let counts: Vec<u64> = (0..=n - s).map(|k| brute_window(&a, k, s)).collect();
        let lower = family_membership(&a, &FamilyProxy::banach_lower(delta, s)).unwrap();
        let want = counts.iter().all(|&c| c as f64 >= delta * s as f64);
        assert_eq!(lower.holds, want);
        if let Some(Witness::Window { start, count, .. }) = lower.witness {
            assert_eq!(count, brute_window(&a, start - 1, s));
        }
        let upper = family_membership(&a, &FamilyProxy::banach_upper(delta, s)).unwrap();
        assert_eq!(upper.holds, counts.iter().any(|&c| c as f64 >= delta * s as f64));
    }
}

/// Products of the weights themselves, as rationals.
fn rational_products(weights: &[BigRational], j: usize) -> Vec<BigRational> {
    let mut out = vec![BigRational::one()];
    for w in &weights[j..] {
        let next = out.last().unwrap() * w;
        out.push(next);
    }
    out
}

#[test]
fn criterion_sets_match_rational_products() {
    let (w, stages) = gen_prop2_weights(4).unwrap();
    let end = stages.last().unwrap().stage_end;
    let weights: Vec<BigRational> = (1..=end as i64)
        .map(|i| {
            let k = w.log2_weight(i).unwrap().as_integer().unwrap();
            let k: i32 = k.try_into().unwrap();
            if k >= 0 {
                BigRational::from_integer(BigInt::one() << k as usize)
            } else {
                BigRational::new(BigInt::one(), BigInt::one() << (-k) as usize)
            }
        })
        .collect();
    let table = w.table(end).unwrap();
    for (j, m) in [(0usize, q(1, 1)), (0, q(16, 1)), (5, q(3, 1)), (12, q(1, 3))] {
        let prods = rational_products(&weights, j);
        let cs = criterion_set(&table, &Threshold::from_value(&m).unwrap(), j as i64, Direction::Forward)
            .unwrap();
        let brute: Vec<u64> = (1..prods.len()).filter(|&n| prods[n] > m).map(|n| n as u64).collect();
        assert_eq!(cs.set.members(), brute.as_slice(), "j={j}, M={m}");
    }
}

#[test]
fn bilateral_mirrored_set_matches_products() {
    // w_i = 2 for i ≥ 1 and 1/2 for i ≤ 0
    let w = WeightSequence::two_sided(q(2, 1), q(1, 2)).unwrap();
    let table = w.table(40).unwrap();
    let weight = |i: i64| if i >= 1 { q(2, 1) } else { q(1, 2) };
    for j in [-10i64, 0, 7] {
        let cs = criterion_set(&table, &Threshold::pow2(3), j, Direction::Mirrored).unwrap();
        let brute: Vec<u64> = (1..=(j + 40) as u64)
            .filter(|&n| {
                let p = (j - n as i64 + 1..=j).fold(BigRational::one(), |acc, i| acc * weight(i));
                p.recip() > q(8, 1)
            })
            .collect();
        assert_eq!(cs.set.members(), brute.as_slice(), "j={j}");
    }
}

#[test]
fn menet_products_match_published_closed_form() {
    // ∏_{ν≤99} w_ν = 100^{1/4} for p = 2, i.e. log2 ≈ 1.66096
    let t = WeightSequence::menet(2.0).unwrap().table(1000).unwrap();
    assert!((t.get(99).unwrap().to_f64() - 1.660964).abs() < 1e-6);
    for n in [1u64, 10, 500, 1000] {
        assert!((t.get(n as i64).unwrap().to_f64() - menet_closed_form(n, 2.0)).abs() < 1e-12);
    }
    // w_1 = 2^{1/4}
    let w1 = WeightSequence::menet(2.0).unwrap().log2_weight(1).unwrap().to_f64().exp2();
    assert!((w1 - 1.189207).abs() < 1e-6);
}

#[test]
fn scaled_family_prop2_fails_syndetic_for_small_gaps() {
    let (w, stages) = gen_prop2_weights(5).unwrap();
    let table = w.table(stages.last().unwrap().stage_end).unwrap();
    // interior gaps are run + 1 = 3..6, the terminal run of stage 5 gives 6
    for g in 1..6 {
        let rep = scaled_family_check(&table, 1, &[Threshold::pow2(0)], &[0], &FamilyProxy::syndetic(g))
            .unwrap();
        assert_eq!(rep.entries[0].verdict, Verdict::Fails, "g={g}");
    }
    let rep = scaled_family_check(&table, 1, &[Threshold::pow2(0)], &[0], &FamilyProxy::syndetic(6)).unwrap();
    assert_eq!(rep.entries[0].verdict, Verdict::Holds);
}

#[test]
fn dyadic_block_sequence_values() {
    let e = gen_example313(&[2], 10).unwrap();
    assert_eq!(e.log2_lambda(0), Some(0));
    assert_eq!(e.log2_lambda(1), Some(2));
    assert_eq!(e.log2_lambda(5), Some(8));
    assert_eq!(e.log2_lambda(8), Some(16));
    assert_eq!(e.s.members().first(), Some(&4));
    assert!(!e.s.contains(5));
    assert!(e.s.contains(8) && e.s.contains(12) && !e.s.contains(13));
    assert_eq!(e.one_hole_start(64), Some(128));
    assert!(gen_example313(&[2], 3).is_err());
    assert!(gen_example313(&[], 10).is_err());
}

#[test]
fn scan_witness_sets_are_shift_intersections() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..10 {
        let f = random_set(&mut rng, 600, Origin::Zero);
        let exp = recurrence_scan_set("t", &f, vec![], shiftlab::recurrence::ScanParams::new(2, 40, 32)).unwrap();
        for r in &exp.results {
            let brute: Vec<u64> = (0..=600 - 2 * r.k)
                .filter(|&a| f.contains(a) && f.contains(a + r.k) && f.contains(a + 2 * r.k))
                .collect();
            assert_eq!(r.witnesses.members(), brute.as_slice());
        }
        assert!(exp.w_r.iter().all(|&k| (1..=40).contains(&k)));
    }
}

fn exact_norm_pow(entries: &[(i64, BigRational)], p: u32) -> BigRational {
    entries.iter().fold(BigRational::zero(), |acc, (_, c)| {
        let a = if c < &BigRational::zero() { -c.clone() } else { c.clone() };
        acc + num_traits::pow(a, p as usize)
    })
}

#[test]
fn ball_membership_matches_exact_norms() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..200 {
        let p = rng.gen_range(1..=3u32);
        let entries: Vec<(i64, BigRational)> = (0..rng.gen_range(1..5))
            .map(|i| (i, q(rng.gen_range(-8..=8), rng.gen_range(1..=8))))
            .collect();
        let v = FiniteVector::from_rationals(Space::Lp(p), Side::Unilateral, entries.clone()).unwrap();
        let radius = q(rng.gen_range(1..=16), 8);
        let ball = BallQuery::new(FiniteVector::zero(Space::Lp(p), Side::Unilateral), radius.clone()).unwrap();
        let want = exact_norm_pow(&entries, p) < num_traits::pow(radius, p as usize);
        let got = ball_contains(&v, &ball).unwrap().verdict;
        assert_eq!(got, if want { BallVerdict::In } else { BallVerdict::Out });
    }
}
