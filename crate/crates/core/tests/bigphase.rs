use drhodge::bigphase::{
    check_identity, check_identity_perturbed, expand, lambda_bracket, pixton_bracket, tensor_swap_check, Identity,
    OpenBracket, Phase, TExpr,
};
use drhodge::exact::rat;
use drhodge::{Engine, Rational};
use num_traits::Zero;
use proptest::prelude::*;

/// Jet of a correlator <<tau_ks>>_g indexed by bitmasks of the extras.
fn corr(e: &Engine, g: u32, ks: &[u32], extras: &[u32]) -> Vec<Rational> {
    (0..1usize << extras.len())
        .map(|mask| {
            let mut all = ks.to_vec();
            all.extend(extras.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &x)| x));
            e.psi_value(g, &all)
        })
        .collect()
}

fn mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    (0..a.len())
        .map(|m| {
            let mut acc = Rational::zero();
            let mut s = m;
            loop {
                acc += &a[s] * &b[m & !s];
                if s == 0 {
                    break;
                }
                s = (s - 1) & m;
            }
            acc
        })
        .collect()
}

fn sub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn add(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

/// <<T(tau_k)>>_g = <<tau_{k+1}>>_g - <<tau_k tau_0>>_0 <<tau_0>>_g.
fn t_once_by_hand(e: &Engine, g: u32, k: u32, extras: &[u32]) -> Rational {
    let v = sub(
        &corr(e, g, &[k + 1], extras),
        &mul(&corr(e, 0, &[k, 0], extras), &corr(e, g, &[0], extras)),
    );
    v.last().unwrap().clone()
}

/// T^2(tau_k) = tau_{k+2} - A_k tau_1 - A_{k+1} tau_0 + A_k A_0 tau_0 with
/// A_j = <<tau_j tau_0>>_0.
fn t_twice_by_hand(e: &Engine, g: u32, k: u32, extras: &[u32]) -> Rational {
    let a = |j: u32| corr(e, 0, &[j, 0], extras);
    let b = |j: u32| corr(e, g, &[j], extras);
    let mut v = b(k + 2);
    v = sub(&v, &mul(&a(k), &b(1)));
    v = sub(&v, &mul(&a(k + 1), &b(0)));
    v = add(&v, &mul(&mul(&a(k), &a(0)), &b(0)));
    v.last().unwrap().clone()
}

#[test]
fn expansion_of_t_squared() {
    let terms = expand(&TExpr::t_power(2, 1));
    let mut signed: Vec<(i8, Vec<u32>, u32)> = terms.into_iter().map(|t| (t.sign, t.corrections, t.index)).collect();
    signed.sort();
    let mut expected = vec![(1, vec![], 3), (-1, vec![1], 1), (-1, vec![2], 0), (1, vec![1, 0], 0)];
    expected.sort();
    assert_eq!(signed, expected);
}

#[test]
fn genus_one_t_of_tau_zero() {
    let e = Engine::new();
    let ph = Phase::new(&e, &[]);
    assert_eq!(ph.bracket(1, &[TExpr::Tau(0).t()], false).top(), rat(1, 24));
    // degree forces the one-point derivative to vanish
    let ph = Phase::new(&e, &[0]);
    assert!(ph.bracket(1, &[TExpr::Tau(0).t()], false).top().is_zero());
}

#[test]
fn dual_route_brackets() {
    let e = Engine::new();
    for (a, b, g, extras) in [(0, 0, 1, vec![]), (1, 0, 1, vec![0]), (0, 1, 1, vec![]), (1, 1, 1, vec![1]), (2, 1, 2, vec![])] {
        let p = pixton_bracket(&e, a, b, g, &extras).unwrap();
        let l = lambda_bracket(&e, a, b, g, &extras);
        assert_eq!(p, l, "T^{a} T^{b} genus {g} extras {extras:?}");
    }
}

#[test]
fn catalog_passes() {
    let e = Engine::new();
    let extra_sets: Vec<Vec<u32>> = vec![vec![], vec![0], vec![1], vec![0, 1], vec![0, 0]];
    for g in 1..=2 {
        for ex in &extra_sets {
            for id in [Identity::Fp { g, l: g + 1 }, Identity::LiuXu { g }] {
                let r = check_identity(&e, &id, ex).unwrap();
                assert!(r.pass, "{} {:?}: {:?}", r.id, ex, r.chain);
            }
        }
    }
    for g in 2..=3 {
        for ex in [vec![], vec![0]] {
            let r = check_identity(&e, &Identity::Thm1 { g }, &ex).unwrap();
            assert!(r.pass, "{} {:?}: {:?}", r.id, ex, r.chain);
        }
    }
    for id in [Identity::Cor { g: 2 }, Identity::Eq218 { g: 2 }, Identity::Trr1 { k: 0 }, Identity::Trr1 { k: 1 }, Identity::G2Example] {
        let r = check_identity(&e, &id, &[]).unwrap();
        assert!(r.pass, "{}: {:?}", r.id, r.chain);
    }
}

#[test]
fn fp_holds_beyond_first_index() {
    let e = Engine::new();
    for ex in [vec![], vec![0], vec![2]] {
        let r = check_identity(&e, &Identity::Fp { g: 1, l: 3 }, &ex).unwrap();
        assert!(r.pass, "{:?}", r.chain);
    }
}

#[test]
fn extras_cap_enforced() {
    let e = Engine::new();
    assert!(check_identity(&e, &Identity::Trr1 { k: 0 }, &[0, 0, 0]).is_err());
    assert!(check_identity(&e, &Identity::Trr1 { k: 0 }, &[5]).is_err());
    assert!(Identity::parse("nope", 2, None).is_err());
    assert!(check_identity(&e, &Identity::Fp { g: 2, l: 2 }, &[]).is_err());
}

#[test]
fn perturbations_are_noticed() {
    let e = Engine::new();
    let ids = [
        Identity::Fp { g: 1, l: 2 },
        Identity::Fp { g: 2, l: 3 },
        Identity::LiuXu { g: 2 },
        Identity::Thm1 { g: 2 },
        Identity::Cor { g: 2 },
        Identity::Eq218 { g: 2 },
        Identity::Trr1 { k: 0 },
        Identity::G2Example,
    ];
    for id in ids {
        let sites = id.perturbation_sites();
        assert!(sites.len() >= 2);
        for s in sites {
            let r = check_identity_perturbed(&e, &id, &id.control_extras(), s).unwrap();
            assert!(!r.pass, "{} unchanged", r.id);
        }
    }
}

/// Both pieces of the split-only equation vanish separately in genus one,
/// so a perturbed coefficient cannot be seen there.
#[test]
fn genus_one_split_equation_is_blind() {
    let e = Engine::new();
    let id = Identity::LiuXu { g: 1 };
    for ex in [vec![], vec![0], vec![0, 0], vec![1, 0, 0], vec![3]] {
        for s in id.perturbation_sites() {
            assert!(check_identity_perturbed(&e, &id, &ex, s).unwrap().pass);
        }
    }
}

#[test]
fn tensor_swap() {
    let e = Engine::new();
    let p = OpenBracket { genus: 0, fixed: vec![0, 0] };
    let q = OpenBracket { genus: 1, fixed: vec![] };
    for m in 0..=4 {
        for ex in [vec![], vec![0], vec![0, 1]] {
            let (l, r, ok) = tensor_swap_check(&e, m, &p, &q, &ex);
            assert!(ok, "m={m} extras {ex:?}: {l} vs {r}");
        }
    }
    let q2 = OpenBracket { genus: 2, fixed: vec![1] };
    for m in 0..=4 {
        assert!(tensor_swap_check(&e, m, &q, &q2, &[0]).2, "m={m}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn t_matches_hand_expansion(g in 1u32..=2, k in 0u32..=3, extras in proptest::collection::vec(0u32..=3, 0..=3)) {
        let e = Engine::new();
        let ph = Phase::new(&e, &extras);
        prop_assert_eq!(ph.bracket(g, &[TExpr::Tau(k).t()], false).top(), t_once_by_hand(&e, g, k, &extras));
        prop_assert_eq!(ph.bracket(g, &[TExpr::t_power(2, k)], false).top(), t_twice_by_hand(&e, g, k, &extras));
    }

    #[test]
    fn plain_brackets_are_correlators(g in 0u32..=2, ks in proptest::collection::vec(0u32..=4, 1..=3), extras in proptest::collection::vec(0u32..=2, 0..=2)) {
        let e = Engine::new();
        let ph = Phase::new(&e, &extras);
        let slots: Vec<TExpr> = ks.iter().map(|&k| TExpr::Tau(k)).collect();
        let mut all = ks.clone();
        all.extend(&extras);
        prop_assert_eq!(ph.bracket(g, &slots, false).top(), e.psi_value(g, &all));
    }
}
