use std::path::PathBuf;

use intapprox::toric::{
    cartier_data, cox_height, delta_for_boundary, enumerate_toric, primitive_collections,
    simplicial_effective_cone, validate_fan, CoxPoint, Fan, FanFile, LineBundle,
};
use proptest::prelude::*;

fn corpus() -> Vec<(String, FanFile)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fans");
    let mut out: Vec<(String, FanFile)> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "toml"))
        .map(|p| {
            let text = std::fs::read_to_string(&p).unwrap();
            let name = p.file_stem().unwrap().to_string_lossy().into_owned();
            (name, FanFile::from_toml(&text).unwrap())
        })
        .collect();
    out.sort_by(|a, b| a.0.cmp(&b.0));
    out
}

#[test]
fn corpus_fans_are_valid_with_ample_classes() {
    let files = corpus();
    assert_eq!(files.len(), 7);
    for (name, f) in &files {
        let fan = f.fan();
        assert!(validate_fan(&fan).is_empty(), "{name}");
        assert_eq!(fan.picard_rank().unwrap(), fan.nrays() - fan.dim);
        let l = f.line_bundle().unwrap();
        assert!(cartier_data(&fan, &l).unwrap().ample, "{name}");
        let pc = primitive_collections(&fan);
        for r in 0..fan.nrays() {
            assert!(pc.central.iter().filter(|p| p.contains(&r)).count() <= 1, "{name}");
        }
        let boundary = f.boundary_rays.clone().unwrap();
        let delta = delta_for_boundary(&fan, &l, &boundary).unwrap();
        assert!(delta.is_some_and(|d| d > 0), "{name}");
        assert_eq!(simplicial_effective_cone(&fan).is_none(), name == "dp6");
    }
}

#[test]
fn enumerated_points_are_integral_and_bounded() {
    for (name, f) in corpus() {
        let fan = f.fan();
        let l = f.line_bundle().unwrap();
        let star = f.boundary_rays.clone().unwrap()[0];
        let bound = if fan.dim == 3 { 6 } else { 25 };
        let pts = enumerate_toric(&fan, &l, &[star], bound).unwrap();
        assert!(!pts.is_empty(), "{name}");
        assert!(pts.windows(2).all(|w| w[0] < w[1]));
        for (h, x) in &pts {
            assert!(x.is_primitive(&fan));
            assert_eq!(x.coords()[star].abs(), 1);
            assert_eq!(cox_height(&fan, &l, x).unwrap(), (*h).into());
            assert!(*h <= bound);
        }
    }
}

/// Reduction oracle: a primitive tuple lands in the boundary mod p exactly
/// when p divides the boundary coordinate.
#[test]
fn integrality_matches_reduction_mod_p() {
    let primes = [2i64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47];
    let p2 = Fan::projective(2);
    for a in -12i64..=12 {
        for b in -12i64..=12 {
            for c in -12i64..=12 {
                let Ok(x) = CoxPoint::new(vec![a, b, c]) else { continue };
                if !x.is_primitive(&p2) {
                    continue;
                }
                let reduces = primes.iter().any(|p| c % p == 0) || c == 0;
                assert_eq!(!reduces, c.abs() == 1);
            }
        }
    }
}

fn flip(fan: &Fan, x: &[i64], mask: u32) -> Option<Vec<i64>> {
    let ok = (0..fan.dim).all(|j| {
        (0..fan.nrays())
            .filter(|&r| mask >> r & 1 == 1)
            .map(|r| fan.rays[r][j])
            .sum::<i64>()
            % 2
            == 0
    });
    ok.then(|| {
        x.iter()
            .enumerate()
            .map(|(r, &c)| if mask >> r & 1 == 1 { -c } else { c })
            .collect()
    })
}

proptest! {
    #[test]
    fn height_is_sign_and_cone_order_invariant(
        x in prop::collection::vec(-30i64..=30, 4),
        mask in 0u32..16,
        rot in 0usize..4,
    ) {
        prop_assume!(x.iter().any(|&c| c != 0));
        let f2 = Fan::hirzebruch(2);
        let l = LineBundle::new(vec![0, 0, 1, 1]);
        let h = cox_height(&f2, &l, &CoxPoint::new(x.clone()).unwrap()).unwrap();
        if let Some(y) = flip(&f2, &x, mask) {
            prop_assert_eq!(cox_height(&f2, &l, &CoxPoint::new(y).unwrap()).unwrap(), h.clone());
        }
        let mut rotated = f2.clone();
        rotated.max_cones.rotate_left(rot);
        prop_assert_eq!(cox_height(&rotated, &l, &CoxPoint::new(x).unwrap()).unwrap(), h);
    }

    #[test]
    fn delta_is_linear_equivalence_invariant(m0 in -20i64..=20, m1 in -20i64..=20, a in 1i64..4, b in 1i64..4) {
        let p1xp1 = Fan::projective(1).product(&Fan::projective(1));
        let base = vec![a, 0, b, 0];
        let shifted: Vec<i64> = p1xp1
            .rays
            .iter()
            .zip(&base)
            .map(|(r, c)| c + m0 * r[0] + m1 * r[1])
            .collect();
        let l0 = LineBundle::new(base);
        let l1 = LineBundle::new(shifted);
        for p in [[0usize, 1], [2, 3]] {
            prop_assert_eq!(
                intapprox::toric::delta_p(&p1xp1, &l0, &p).unwrap(),
                intapprox::toric::delta_p(&p1xp1, &l1, &p).unwrap()
            );
        }
    }
}
