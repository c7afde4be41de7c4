//! Cross-checks of the exact algebra against independent brute-force
//! routes: minor gcds, Hermite-reduction quotient enumeration, the direct
//! kernel description of the compact group, and chart/isotropy agreement.

mod common;

use common::{
    brute_force_quotient_order, minor_gcd_invariant_factors, random_matrix, random_stacky_fan,
    random_unimodular, TestRng,
};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use toristack_core::exactalg::{
    cokernel, integer_kernel, smith_normal_form, FinAbGroup, IntMatrix,
};
use toristack_core::fan::ZeroPattern;
use toristack_core::linalg::{solve, RatMatrix};
use toristack_core::stackbuild::{build_h, build_kerbar, isotropy, local_chart, Flavor};
use toristack_core::{Int, Rat};

#[test]
fn snf_recomposes_on_random_matrices() {
    let mut rng = TestRng::new(11);
    for _ in 0..100 {
        let a = random_matrix(&mut rng, 4, 3, 9);
        let d = smith_normal_form(&a);
        assert!(d.verify(&a), "failed on {a:?}");
    }
}

#[test]
fn invariant_factors_match_minor_gcds() {
    let mut rng = TestRng::new(23);
    for _ in 0..60 {
        let rows = rng.below(3) as usize + 1;
        let cols = rng.below(4) as usize + 1;
        let a = random_matrix(&mut rng, rows, cols, 7);
        let snf = smith_normal_form(&a);
        assert_eq!(
            snf.invariant_factors,
            minor_gcd_invariant_factors(&a),
            "failed on {a:?}"
        );
    }
}

#[test]
fn cokernel_order_matches_brute_force_enumeration() {
    let mut rng = TestRng::new(37);
    let mut finite_cases = 0;
    while finite_cases < 40 {
        let rows = rng.below(3) as usize + 1;
        let cols = rows + rng.below(2) as usize;
        let a = random_matrix(&mut rng, rows, cols, 6);
        let Some(brute) = brute_force_quotient_order(&a, 1000) else {
            continue;
        };
        finite_cases += 1;
        let group = cokernel(&a).group;
        assert_eq!(group.order(), Some(brute), "failed on {a:?}");
    }
}

#[test]
fn cokernel_is_invariant_under_unimodular_changes() {
    let mut rng = TestRng::new(59);
    for _ in 0..40 {
        let a = random_matrix(&mut rng, 3, 4, 8);
        let p = random_unimodular(&mut rng, 3);
        let q = random_unimodular(&mut rng, 4);
        let transformed = p.mul(&a).mul(&q);
        assert_eq!(cokernel(&a).group, cokernel(&transformed).group);
    }
}

#[test]
fn integer_kernel_is_saturated_and_annihilated() {
    let mut rng = TestRng::new(71);
    for _ in 0..60 {
        let rows = rng.below(3) as usize + 1;
        let cols = rng.below(4) as usize + 2;
        let a = random_matrix(&mut rng, rows, cols, 9);
        let basis = random_kernel_checks(&a);
        // saturation: the basis generates a direct summand
        if basis.cols() > 0 {
            let snf = smith_normal_form(&basis);
            assert!(snf.invariant_factors.iter().all(|d| d.is_one()));
        }
    }
}

fn random_kernel_checks(a: &IntMatrix) -> IntMatrix {
    let basis = integer_kernel(a);
    assert_eq!(basis.cols(), a.cols() - a.rank());
    assert!(a.mul(&basis).is_zero());
    basis
}

#[test]
fn dualized_sequence_is_exact() {
    // rows of beta^* generate exactly the kernel of the beta^v projection
    let mut rng = TestRng::new(83);
    let mut cases = 0;
    while cases < 40 {
        let d = rng.below(3) as usize + 1;
        let m = d + rng.below(3) as usize + 1;
        let beta = random_matrix(&mut rng, d, m, 5);
        if beta.rank() < d {
            continue;
        }
        cases += 1;
        let beta_star = beta.transpose();
        let p = cokernel(&beta_star);
        let (l, k) = (p.group.free_rank(), p.group.torsion().len());

        // the projection kills the image of beta^*
        for col in 0..beta_star.cols() {
            let image = p.apply(&beta_star.col_vec(col));
            assert!(image.iter().all(Zero::is_zero));
        }

        // kernel lattice of (free rows, torsion rows mod d) as the x-part
        // of an augmented integer kernel
        let mut stacked = IntMatrix::zero(l + k, m + k);
        for j in 0..m {
            for i in 0..k {
                stacked[(i, j)] = p.projection[(i, j)].clone();
            }
            for i in 0..l {
                stacked[(k + i, j)] = p.projection[(k + i, j)].clone();
            }
        }
        for i in 0..k {
            stacked[(i, m + i)] = p.group.torsion()[i].clone();
        }
        let aug_kernel = integer_kernel(&stacked);
        let projection_kernel =
            IntMatrix::from_fn(m, aug_kernel.cols(), |i, j| aug_kernel[(i, j)].clone());

        // mutual containment of the lattices im(beta^*) and ker(projection)
        assert!(lattice_contains(&beta_star, &projection_kernel));
        assert!(lattice_contains(&projection_kernel, &beta_star));
    }
}

/// Does the column lattice of `a` contain every column of `b`?
fn lattice_contains(a: &IntMatrix, b: &IntMatrix) -> bool {
    let a_rat = RatMatrix::from_int_matrix(a);
    (0..b.cols()).all(|j| {
        let rhs: Vec<Rat> = (0..b.rows())
            .map(|i| Rat::from_integer(b[(i, j)].clone()))
            .collect();
        match solve(&a_rat, &rhs) {
            None => false,
            Some(coeffs) => {
                let back = a_rat.mul_vec(&coeffs);
                back == rhs && coeffs.iter().all(|c| c.is_integer())
            }
        }
    })
}

/// Independent description of the compact kernel group straight from the
/// Smith form of `beta` itself: invariant factors give the torsion, the
/// kernel gives the free rank.
fn kerbar_direct(beta: &IntMatrix) -> FinAbGroup {
    let snf = smith_normal_form(beta);
    let torsion: Vec<Int> = snf
        .invariant_factors
        .iter()
        .filter(|v| v.abs() >= Int::from(2))
        .map(|v| v.abs())
        .collect();
    FinAbGroup::new(beta.cols() - snf.rank(), torsion)
}

#[test]
fn kerbar_presentation_matches_the_direct_route() {
    let mut rng = TestRng::new(97);
    for _ in 0..100 {
        let sf = random_stacky_fan(&mut rng, 4);
        let g = build_kerbar(&sf);
        assert_eq!(g.flavor, Flavor::Compact);
        assert_eq!(g.group(), kerbar_direct(sf.beta()), "fan {:?}", sf.fan());
        assert!(g.embedding_is_injective());

        // free exponent columns lie in ker(beta)
        let free = g.free_columns();
        assert!(sf.beta().mul(&free).is_zero());
        // torsion exponent columns lie in the kernel modulo their order
        for (i, t) in g.torsion.iter().enumerate() {
            let col = g.exponents.col_vec(g.free_rank + i);
            let image = sf.beta().mul_vec(&col);
            assert!(image.iter().all(|v| v.is_multiple_of(t)));
        }
    }
}

#[test]
fn isotropy_at_maximal_cones_equals_the_local_chart_group() {
    let mut rng = TestRng::new(113);
    for _ in 0..60 {
        let sf = random_stacky_fan(&mut rng, 4);
        let h = build_h(&sf);
        for cone in sf.fan().max_cones() {
            let pattern = ZeroPattern::from_indices(cone.iter().copied());
            let stabilizer = isotropy(&h, &pattern).group;
            let chart = local_chart(&sf, cone).unwrap();
            assert_eq!(stabilizer, chart.chart_group);
            assert_eq!(chart.chart_group.order(), Some(chart.order.clone()));
        }
    }
}

#[test]
fn chart_orders_multiply_over_labels() {
    let mut rng = TestRng::new(127);
    for _ in 0..60 {
        let sf = random_stacky_fan(&mut rng, 4);
        for cone in sf.fan().max_cones() {
            let (labels, total, unlabelled) =
                toristack_core::stackbuild::chart_extension(&sf, cone).unwrap();
            assert_eq!(
                total.order().unwrap(),
                labels.order().unwrap() * unlabelled.order().unwrap()
            );
        }
    }
}

#[test]
fn regular_value_check_matches_an_exhaustive_scan() {
    // the implementation prunes through the downward-closed feasible
    // family; compare against scanning every one of the 2^m patterns
    let mut rng = TestRng::new(131);
    for case in 0..30 {
        let sf = random_stacky_fan(&mut rng, 3);
        let m = sf.num_rays();
        if m > 6 {
            continue;
        }
        let etas: Vec<Rat> = (0..m)
            .map(|_| Rat::from_integer(rng.int_in(0, 3).into()))
            .collect();
        let md = toristack_core::momentred::moment_data_for(&sf, &etas);
        let md = if case % 3 == 0 {
            // degenerate levels exercise the failing branch
            md.with_xi(vec![Rat::from_integer(0.into()); md.level_rank()])
        } else {
            md
        };

        let l = md.level_rank();
        let mut expected = true;
        for mask in 0u64..(1 << m) {
            let pattern =
                ZeroPattern::from_indices((0..m).filter(|bit| mask & (1 << bit) != 0));
            if !toristack_core::momentred::level_set_feasibility(&md, &pattern).feasible {
                continue;
            }
            let complement: Vec<usize> = (0..m).filter(|j| !pattern.contains(*j)).collect();
            if md.iota_star().select_cols(&complement).rank() != l {
                expected = false;
                break;
            }
        }
        let (actual, offending) =
            toristack_core::momentred::check_regular_value(&md, sf.fan());
        assert_eq!(actual, expected, "fan {:?} etas {etas:?}", sf.fan());
        assert_eq!(actual, offending.is_none());
    }
}

#[test]
fn level_inclusion_matches_an_exhaustive_scan() {
    // minimal-pattern pruning against checking every inadmissible subset
    let mut rng = TestRng::new(137);
    for case in 0..30 {
        let sf = random_stacky_fan(&mut rng, 3);
        let m = sf.num_rays();
        if m > 6 {
            continue;
        }
        let etas: Vec<Rat> = (0..m)
            .map(|_| Rat::from_integer(rng.int_in(0, 3).into()))
            .collect();
        let md = toristack_core::momentred::moment_data_for(&sf, &etas);
        let md = if case % 3 == 0 {
            md.with_xi(vec![Rat::from_integer(0.into()); md.level_rank()])
        } else {
            md
        };

        let mut expected = true;
        for mask in 0u64..(1 << m) {
            let pattern =
                ZeroPattern::from_indices((0..m).filter(|bit| mask & (1 << bit) != 0));
            if sf.fan().is_admissible(&pattern) {
                continue;
            }
            if toristack_core::momentred::level_set_feasibility(&md, &pattern).feasible {
                expected = false;
                break;
            }
        }
        let (actual, _) =
            toristack_core::momentred::level_set_in_cm(&md, sf.fan()).unwrap();
        assert_eq!(actual, expected, "fan {:?} etas {etas:?}", sf.fan());
    }
}

#[test]
fn brute_force_oracle_agrees_with_known_orders() {
    // sanity-check the oracle itself on hand-computable cases
    let diag = IntMatrix::from_rows(&[&[2, 0], &[0, 3]]);
    assert_eq!(brute_force_quotient_order(&diag, 100), Some(Int::from(6)));
    let wide = IntMatrix::from_rows(&[&[1, 0, -2], &[0, 1, -2]]);
    assert_eq!(brute_force_quotient_order(&wide, 100), Some(Int::one()));
    let square = IntMatrix::from_rows(&[&[2, 1], &[0, 2]]);
    assert_eq!(brute_force_quotient_order(&square, 100), Some(Int::from(4)));
    let singular = IntMatrix::from_rows(&[&[1, 1], &[1, 1]]);
    assert_eq!(brute_force_quotient_order(&singular, 100), None);
    let empty_target = IntMatrix::zero(0, 2);
    assert_eq!(
        brute_force_quotient_order(&empty_target, 100),
        Some(Int::one())
    );
}
