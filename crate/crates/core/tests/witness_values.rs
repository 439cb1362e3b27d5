use std::collections::BTreeSet;
use std::f64::consts::{FRAC_PI_4, FRAC_PI_6, SQRT_2};

use approx::assert_abs_diff_eq;
use netcert::behavior::{behavior_from_pr_chain, check_no_signaling, marginalize_behavior, Behavior, Scenario};
use netcert::strategy::{canonical_b3, canonical_bilocal, canonical_chain, canonical_star, ChainVariant};
use netcert::witness::{
    canonical_conditioning, eval_bilocal_ij, eval_chain_ij, eval_chain_ij_even, eval_linear_b3, eval_linear_bn,
    eval_star_ij, eval_star_svetlichny, eval_star_svetlichny_on, evaluate, Family, SvetlichnyLayout,
};

#[test]
fn bilocal_maximal() {
    let b = canonical_bilocal(FRAC_PI_4, FRAC_PI_4, Some(FRAC_PI_4)).unwrap().behavior().unwrap();
    let w = eval_bilocal_ij(&b).unwrap();
    assert_abs_diff_eq!(w.components["I"], 0.5, epsilon = 1e-12);
    assert_abs_diff_eq!(w.components["J"], 0.5, epsilon = 1e-12);
    assert_abs_diff_eq!(w.value, SQRT_2, epsilon = 1e-12);
}

#[test]
fn bilocal_equality_case_sits_on_the_bound() {
    // sin2θ₁ sin2θ₂ = √2 − 1 with θ₂ = π/4, and cos ϑ = 1/√(1 + s).
    let s = SQRT_2 - 1.0;
    let theta1 = s.asin() / 2.0;
    let vartheta = (1.0 / (1.0 + s).sqrt()).acos();
    let b = canonical_bilocal(theta1, FRAC_PI_4, Some(vartheta)).unwrap().behavior().unwrap();
    assert_abs_diff_eq!(eval_bilocal_ij(&b).unwrap().value, 2f64.powf(0.25), epsilon = 1e-9);
}

#[test]
fn chain_three_agrees_with_bilocal_form() {
    // Bob's two bits become two settings; both evaluations are then the same number.
    let b = canonical_chain(&[0.5, 0.9], ChainVariant::Ij).unwrap().behavior().unwrap();
    let w = eval_chain_ij(&b, 3).unwrap();
    let bil = canonical_bilocal(0.5, 0.9, None).unwrap().behavior().unwrap();
    assert_abs_diff_eq!(w.value, eval_bilocal_ij(&bil).unwrap().value, epsilon = 1e-12);
}

#[test]
fn chain_five_maximal() {
    let s = canonical_chain(&[FRAC_PI_4; 4], ChainVariant::Ij).unwrap();
    let w = eval_chain_ij(&s.behavior().unwrap(), 5).unwrap();
    assert_abs_diff_eq!(w.value, SQRT_2, epsilon = 1e-9);
    assert!(w.value > 2f64.powf(1.0 / 3.0));
}

#[test]
fn chain_product_sources_have_no_j() {
    let b = canonical_chain(&[0.0; 4], ChainVariant::Ij).unwrap().behavior().unwrap();
    let w = eval_chain_ij(&b, 5).unwrap();
    assert_abs_diff_eq!(w.components["J"], 0.0, epsilon = 1e-12);
    assert!(w.value <= 1.0 + 1e-12);
}

#[test]
fn even_chain_uses_both_marginals() {
    let b = canonical_chain(&[FRAC_PI_4; 4], ChainVariant::Ij).unwrap().behavior().unwrap();
    // Dropping A5 leaves a valid four-party chain behavior.
    let four = marginalize_behavior(&b, "A5", 0).unwrap();
    assert_eq!(four.scenario().num_parties(), 4);
    let w = eval_chain_ij_even(&four, 4, 0).unwrap();
    assert!(w.value <= SQRT_2 + 1e-9);
    assert_abs_diff_eq!(w.value, w.recompute(), epsilon = 1e-12);
}

#[test]
fn star_values() {
    let b = canonical_star(&[FRAC_PI_4; 3], Some(FRAC_PI_4), false).unwrap().behavior().unwrap();
    let w = eval_star_ij(&b, 3).unwrap();
    assert_abs_diff_eq!(w.components["I"], 2f64.powf(-1.5), epsilon = 1e-12);
    assert_abs_diff_eq!(w.components["J"], 2f64.powf(-1.5), epsilon = 1e-12);
    assert_abs_diff_eq!(w.value, SQRT_2, epsilon = 1e-12);

    let noisy = canonical_star(&[FRAC_PI_4; 3], Some(FRAC_PI_4), false).unwrap().with_visibilities(&[0.8; 3]).unwrap();
    let v = eval_star_ij(&noisy.behavior().unwrap(), 3).unwrap().value;
    assert_abs_diff_eq!(v, SQRT_2 * 0.8, epsilon = 1e-12);
    assert!(v < 2f64.powf(1.0 / 3.0));

    let one = canonical_star(&[FRAC_PI_4], Some(FRAC_PI_4), false).unwrap().behavior().unwrap();
    assert!(eval_star_ij(&one, 1).unwrap().value <= SQRT_2 + 1e-12);
}

#[test]
fn linear_b3_values() {
    let b = canonical_b3(FRAC_PI_4, FRAC_PI_4, Some(FRAC_PI_4)).unwrap().behavior().unwrap();
    assert_abs_diff_eq!(eval_linear_b3(&b).unwrap().value, 2.0 * SQRT_2, epsilon = 1e-12);
    // θ₁ = π/6, θ₂ = π/4 at the optimal ϑ: 2√(1 + 3/4).
    let s = canonical_b3(FRAC_PI_6, FRAC_PI_4, None).unwrap();
    let v = eval_linear_b3(&s.behavior().unwrap()).unwrap().value;
    assert_abs_diff_eq!(v, 2.0 * 1.75f64.sqrt(), epsilon = 1e-9);
    assert_abs_diff_eq!(v, s.predicted_value.unwrap(), epsilon = 1e-9);
}

#[test]
fn linear_bn_values() {
    let b = canonical_chain(&[FRAC_PI_4; 3], ChainVariant::Bn).unwrap().behavior().unwrap();
    let w = eval_linear_bn(&b, 4).unwrap();
    assert_abs_diff_eq!(w.value, 2.0 * SQRT_2, epsilon = 1e-9);
    for thetas in [[0.3, 0.7, 1.1], [0.2, FRAC_PI_4, 0.6]] {
        let s = canonical_chain(&thetas, ChainVariant::Bn).unwrap();
        let v = eval_linear_bn(&s.behavior().unwrap(), 4).unwrap().value;
        assert_abs_diff_eq!(v, s.predicted_value.unwrap(), epsilon = 1e-9);
    }
}

/// With Charlie's settings read as (0, 1, 2, 1), the Φ⁺ and Ψ⁺ blocks of B₃ are
/// the `00` and `01` blocks of the linear chain witness.
#[test]
fn linear_bn_three_matches_b3_blocks() {
    let b3 = canonical_b3(0.4, 0.8, None).unwrap().behavior().unwrap();
    let w3 = eval_linear_b3(&b3).unwrap();
    // Bob's labels (Φ⁺, Φ⁻, Ψ⁺, Ψ⁻) become XOR labels (00, 11, 01, 10).
    let relabel = [0usize, 3, 1, 2];
    let regroup = |charlie: [usize; 4]| {
        let sc = Scenario::from_shape(&[(2, 2), (1, 4), (4, 2)]).unwrap();
        let bn = Behavior::from_fn(sc, |x, a| {
            let bob = relabel.iter().position(|&l| l == a[1]).unwrap();
            b3.prob(&[x[0], 0, charlie[x[2]]], &[a[0], bob, a[2]])
        })
        .unwrap();
        eval_linear_bn(&bn, 3).unwrap()
    };
    let bn = regroup([0, 1, 2, 1]);
    assert_abs_diff_eq!(bn.components["block_00"], w3.components["block_0"], epsilon = 1e-12);
    assert_abs_diff_eq!(bn.components["block_01"], w3.components["block_2"], epsilon = 1e-12);
}

#[test]
fn svetlichny_three_branches() {
    let s = canonical_star(&[FRAC_PI_4; 3], None, true).unwrap();
    let b = s.behavior().unwrap();
    let w = eval_star_svetlichny(&b, 3, &s.conditioning).unwrap();
    assert_abs_diff_eq!(w.value, 4.0 * SQRT_2, epsilon = 1e-9);
    for (k, p) in w.components.iter().filter(|(k, _)| k.starts_with("p_")) {
        assert_abs_diff_eq!(*p, 0.125, epsilon = 1e-12);
        assert!(k.len() == 5);
    }
    assert_eq!(s.conditioning, canonical_conditioning(3).unwrap());
    assert_abs_diff_eq!(evaluate(Family::StarSvetlichny, &b, 3).unwrap().value, w.value, epsilon = 1e-15);
}

#[test]
fn svetlichny_two_branches_is_the_b3_value() {
    // Bell-basis centre B with branches A (2 settings) and C (3 settings).
    let b = canonical_b3(FRAC_PI_4, FRAC_PI_4, Some(FRAC_PI_4)).unwrap().behavior().unwrap();
    let layout = SvetlichnyLayout {
        center: 1,
        branches: vec![0, 2],
        conditioning: vec![
            vec![(0, 1), (0, 1)],
            vec![(1, 0), (0, 1)],
            vec![(0, 1), (2, 1)],
            vec![(1, 0), (2, 1)],
        ],
    };
    let w = eval_star_svetlichny_on(&b, &layout).unwrap();
    assert_abs_diff_eq!(w.value, eval_linear_b3(&b).unwrap().value, epsilon = 1e-12);
    assert_abs_diff_eq!(w.value, 2.0 * SQRT_2, epsilon = 1e-12);
}

#[test]
fn svetlichny_incomplete_conditioning() {
    let s = canonical_star(&[FRAC_PI_4; 2], None, true).unwrap();
    let b = s.behavior().unwrap();
    assert!(eval_star_svetlichny(&b, 2, &s.conditioning[..3]).is_err());
}

#[test]
fn pr_chain_saturates_isolated_bound() {
    // Oracle: 2^{1 − 2|S|/(n+1)} for the isolated-party count of each placement.
    let cases: [(usize, &[usize], usize); 4] = [(5, &[1], 1), (5, &[2], 0), (5, &[2, 3], 1), (3, &[1], 1)];
    for (n, positions, isolated) in cases {
        let set: BTreeSet<usize> = positions.iter().copied().collect();
        let b = behavior_from_pr_chain(n, &set).unwrap();
        assert!(check_no_signaling(&b).is_empty());
        let v = eval_chain_ij(&b, n).unwrap().value;
        let bound = 2f64.powf(1.0 - 2.0 * isolated as f64 / (n + 1) as f64);
        assert_abs_diff_eq!(v, bound, epsilon = 1e-12);
    }
}

#[test]
fn components_recompute() {
    let behaviors = [
        (Family::BilocalIj, 3, canonical_bilocal(0.3, 0.6, None).unwrap().behavior().unwrap()),
        (Family::LinearB3, 3, canonical_b3(0.3, 0.6, None).unwrap().behavior().unwrap()),
        (Family::StarIj, 2, canonical_star(&[0.3, 0.6], None, false).unwrap().behavior().unwrap()),
        (Family::StarSvetlichny, 2, canonical_star(&[0.3, 0.6], None, true).unwrap().behavior().unwrap()),
        (Family::LinearBn, 4, canonical_chain(&[0.3, 0.6, 0.5], ChainVariant::Bn).unwrap().behavior().unwrap()),
    ];
    for (family, n, b) in behaviors {
        let w = evaluate(family, &b, n).unwrap();
        assert_abs_diff_eq!(w.value, w.recompute(), epsilon = 1e-12);
    }
}
