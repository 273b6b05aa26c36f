use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qrf_core::measures::{
    asymmetry, build_cq_state, interaction_information, mutual_asymmetry, mutual_asymmetry_relent, Parts,
};
use qrf_core::qmat::{
    kron, max_abs_diff, partial_trace, random, relative_entropy, von_neumann_entropy, DensityOperator,
};
use qrf_core::symmetry::{
    dephase, dephase_local, finite_design, group_action, sectors, total_charges, twirl_quadrature,
    ChargeSpectrum, SectorDecomposition,
};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn charges(rng: &mut ChaCha8Rng, dim: usize, span: i64) -> ChargeSpectrum {
    ChargeSpectrum::u1((0..dim).map(|_| rng.gen_range(0..=span)).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn entropy_is_unitarily_invariant(seed in any::<u64>(), dim in 2usize..6) {
        let mut r = rng(seed);
        let rho = random::mixed_state(dim, dim, &mut r);
        let u = random::unitary(dim, &mut r);
        let rotated = rho.conjugate_by(&u);
        let (a, b) = (von_neumann_entropy(&rho).unwrap(), von_neumann_entropy(&rotated).unwrap());
        prop_assert!((a - b).abs() < 1e-10);
    }

    #[test]
    fn entropy_is_additive_on_products(seed in any::<u64>(), da in 1usize..4, db in 1usize..4) {
        let mut r = rng(seed);
        let a = random::mixed_state(da, da, &mut r);
        let b = random::mixed_state(db, db, &mut r);
        let joint = von_neumann_entropy(&a.tensor(&b)).unwrap();
        let sum = von_neumann_entropy(&a).unwrap() + von_neumann_entropy(&b).unwrap();
        prop_assert!((joint - sum).abs() < 1e-10);
    }

    #[test]
    fn partial_trace_of_product(seed in any::<u64>(), da in 1usize..4, db in 1usize..4) {
        let mut r = rng(seed);
        let a = random::mixed_state(da, 2, &mut r);
        let b = random::mixed_state(db, 2, &mut r);
        let m = DensityOperator::new(kron(a.matrix(), b.matrix()), vec![da, db]).unwrap();
        let back_a = partial_trace(&m, 0).unwrap();
        let back_b = partial_trace(&m, 1).unwrap();
        prop_assert!(max_abs_diff(back_a.matrix(), a.matrix()) < 1e-12);
        prop_assert!(max_abs_diff(back_b.matrix(), b.matrix()) < 1e-12);
    }

    #[test]
    fn relative_entropy_is_nonnegative(seed in any::<u64>(), dim in 2usize..5) {
        let mut r = rng(seed);
        let rho = random::mixed_state(dim, dim, &mut r);
        let sigma = random::mixed_state(dim, dim, &mut r);
        prop_assert!(relative_entropy(&rho, &sigma).unwrap() >= -1e-10);
        prop_assert!(relative_entropy(&rho, &rho).unwrap().abs() < 1e-9);
    }

    #[test]
    fn dephasing_is_idempotent_and_covariant(seed in any::<u64>(), dim in 2usize..6, theta in 0.0..6.3f64) {
        let mut r = rng(seed);
        let q = charges(&mut r, dim, 6);
        let dec = sectors(&q);
        let rho = random::mixed_state(dim, 2, &mut r);
        let once = dephase(&rho, &dec).unwrap();
        let twice = dephase(&once, &dec).unwrap();
        prop_assert!(max_abs_diff(once.matrix(), twice.matrix()) < 1e-14);
        let moved_then = dephase(&group_action(&rho, &q, theta).unwrap(), &dec).unwrap();
        prop_assert!(max_abs_diff(moved_then.matrix(), once.matrix()) < 1e-12);
        let then_moved = group_action(&once, &q, theta).unwrap();
        prop_assert!(max_abs_diff(then_moved.matrix(), once.matrix()) < 1e-12);
    }

    #[test]
    fn three_twirls_agree(seed in any::<u64>(), dim in 2usize..6) {
        let mut r = rng(seed);
        let q = charges(&mut r, dim, 12);
        let rho = random::mixed_state(dim, dim, &mut r);
        let a = dephase(&rho, &sectors(&q)).unwrap();
        let b = twirl_quadrature(&rho, &q, q.span() as usize + 1).unwrap();
        let c = finite_design(&q).average(&rho, &q).unwrap();
        prop_assert!(max_abs_diff(a.matrix(), b.matrix()) < 1e-10);
        prop_assert!(max_abs_diff(a.matrix(), c.matrix()) < 1e-10);
    }

    #[test]
    fn local_dephasing_refines_global(seed in any::<u64>(), ds in 2usize..4, dr in 2usize..4) {
        let mut r = rng(seed);
        let s = charges(&mut r, ds, 4);
        let q = charges(&mut r, dr, 4);
        let rho = random::mixed_state(ds * dr, 3, &mut r).with_dims(vec![ds, dr]).unwrap();
        let (ls, lr) = (sectors(&s), sectors(&q));
        let global = sectors(&total_charges(&s, &q).unwrap());
        let local = dephase_local(&rho, &ls, &lr).unwrap();
        let both = dephase(&dephase(&rho, &global).unwrap(), &SectorDecomposition::product(&ls, &lr)).unwrap();
        prop_assert!(max_abs_diff(local.matrix(), both.matrix()) < 1e-12);
        // mutual asymmetry of a correlated state is still nonnegative
        let forms = mutual_asymmetry_relent(&rho, &s, &q).unwrap();
        prop_assert!(forms.relative_entropy >= -1e-10);
        prop_assert!(forms.discrepancy() < 1e-9);
    }

    #[test]
    fn mutual_forms_agree_on_products(seed in any::<u64>(), ds in 2usize..4, dr in 2usize..4) {
        let mut r = rng(seed);
        let s = charges(&mut r, ds, 12);
        let q = charges(&mut r, dr, 12);
        let a = random::mixed_state(ds, ds, &mut r);
        let b = random::mixed_state(dr, dr, &mut r);
        let sum = mutual_asymmetry(&a, &b, &s, &q).unwrap();
        let forms = mutual_asymmetry_relent(&a.tensor(&b), &s, &q).unwrap();
        prop_assert!((sum - forms.relative_entropy).abs() < 1e-9);
        prop_assert!((sum - forms.entropy_difference).abs() < 1e-9);
    }

    #[test]
    fn interaction_information_on_products(seed in any::<u64>()) {
        let mut r = rng(seed);
        let s = charges(&mut r, 2, 3);
        let q = charges(&mut r, 3, 3);
        let a = random::pure_state(2, &mut r);
        let b = random::mixed_state(3, 2, &mut r);
        let cq = build_cq_state(&a.tensor(&b), &s, &q).unwrap();
        let info = interaction_information(&cq).unwrap();
        prop_assert!((info - mutual_asymmetry(&a, &b, &s, &q).unwrap()).abs() < 1e-9);
    }

    #[test]
    fn bounds_hold(seed in any::<u64>(), ds in 2usize..5, dr in 2usize..5) {
        let mut r = rng(seed);
        let s = charges(&mut r, ds, 8);
        let q = charges(&mut r, dr, 8);
        let a = random::mixed_state(ds, r.gen_range(1..=ds), &mut r);
        let b = random::mixed_state(dr, r.gen_range(1..=dr), &mut r);
        let m = mutual_asymmetry(&a, &b, &s, &q).unwrap();
        let cap = asymmetry(&a, &sectors(&s)).unwrap().min(asymmetry(&b, &sectors(&q)).unwrap());
        prop_assert!(m >= -1e-9 && m <= cap + 1e-9, "{} vs {}", m, cap);
    }

    #[test]
    fn cq_entropies_ignore_label_order(seed in any::<u64>()) {
        let mut r = rng(seed);
        let s = charges(&mut r, 2, 4);
        let q = charges(&mut r, 2, 4);
        let rho = random::mixed_state(4, 2, &mut r);
        let cq = build_cq_state(&rho, &s, &q).unwrap();
        let mut order: Vec<usize> = (0..cq.entries.len()).collect();
        order.reverse();
        let shift = r.gen_range(0..order.len());
        order.rotate_left(shift);
        let shuffled = cq.permuted(&order);
        for parts in [Parts::None, Parts::S, Parts::R, Parts::SR] {
            let (x, y) = (cq.block_entropy(parts).unwrap(), shuffled.block_entropy(parts).unwrap());
            prop_assert!((x - y).abs() < 1e-12);
        }
        let (x, y) = (interaction_information(&cq).unwrap(), interaction_information(&shuffled).unwrap());
        prop_assert!((x - y).abs() < 1e-12);
    }

    #[test]
    fn joint_entropy_theorem(seed in any::<u64>()) {
        let mut r = rng(seed);
        let s = charges(&mut r, 2, 3);
        let q = charges(&mut r, 3, 3);
        let rho = random::mixed_state(6, 3, &mut r);
        let cq = build_cq_state(&rho, &s, &q).unwrap();
        for parts in [Parts::None, Parts::S, Parts::R, Parts::SR] {
            let a = cq.block_entropy(parts).unwrap();
            let b = cq.block_entropy_direct(parts).unwrap();
            prop_assert!((a - b).abs() < 1e-9);
        }
    }
}

#[test]
fn symmetric_state_has_zero_asymmetry() {
    let mut r = rng(1);
    let q = charges(&mut r, 4, 5);
    let rho = random::mixed_state(4, 4, &mut r);
    let sym = dephase(&rho, &sectors(&q)).unwrap();
    assert!(asymmetry(&sym, &sectors(&q)).unwrap().abs() < 1e-12);
    assert!(asymmetry(&DensityOperator::maximally_mixed(4), &sectors(&q)).unwrap().abs() < 1e-12);
}
