use drhodge::exact::{int, rat, sign};
use drhodge::givental::{
    check_feynman, d_commutation_check, d_operator_check, edge_kernel, feynman_sum, homogeneous_degree, lambda_side,
    r_matrix, Perturb,
};
use drhodge::{Engine, Rational};
use num_traits::Zero;

/// (w + z) V(w, z) = 1 - R(-w) R(-z), coefficient by coefficient.
#[test]
fn kernel_times_w_plus_z() {
    for (u_max, z_max) in [(3, 3), (5, 4), (6, 6)] {
        let r = r_matrix(u_max, z_max + 2).unwrap();
        let v = edge_kernel(u_max, z_max).unwrap();
        for total in 1..=z_max {
            for k in 0..=total {
                let l = total - k;
                let mut lhs = vec![Rational::zero(); u_max + 1];
                if k > 0 {
                    for (x, y) in lhs.iter_mut().zip(v.get(k - 1, l)) {
                        *x += y;
                    }
                }
                if l > 0 {
                    for (x, y) in lhs.iter_mut().zip(v.get(k, l - 1)) {
                        *x += y;
                    }
                }
                let (rk, rl) = (r.z_coeff(k), r.z_coeff(l));
                let s = -sign(total as i64);
                let rhs: Vec<Rational> = (0..=u_max)
                    .map(|n| (0..=n).map(|i| &rk[i] * &rl[n - i]).sum::<Rational>() * &s)
                    .collect();
                assert_eq!(lhs, rhs, "u<={u_max} ({k},{l})");
            }
        }
    }
}

#[test]
fn r_matrix_is_symplectic() {
    let r = r_matrix(6, 6).unwrap();
    for n in 1..=6usize {
        for u in 0..=6usize {
            let c: Rational = (0..=n)
                .flat_map(|j| (0..=u).map(move |i| (i, j)))
                .map(|(i, j)| r.series.coeff(i, j) * r.series.coeff(u - i, n - j) * sign((n - j) as i64))
                .sum();
            assert!(c.is_zero(), "u^{u} z^{n}");
        }
    }
}

#[test]
fn more_edges_change_nothing() {
    let e = Engine::new();
    for (g, extras) in [(1u32, vec![0u32]), (2, vec![]), (2, vec![1])] {
        let full = (3 * g as usize + extras.len()).saturating_sub(3);
        let a = feynman_sum(&e, g, 4, &extras, full, Perturb::default()).unwrap();
        let b = feynman_sum(&e, g, 4, &extras, full + 2, Perturb::default()).unwrap();
        assert_eq!(a, b, "g={g} extras {extras:?}");
    }
}

#[test]
fn deeper_u_truncation_extends() {
    let e = Engine::new();
    let short = feynman_sum(&e, 2, 3, &[], 3, Perturb::default()).unwrap();
    let long = feynman_sum(&e, 2, 5, &[], 3, Perturb::default()).unwrap();
    assert_eq!(short[..], long[..4]);
}

#[test]
fn feynman_expansion_matches_hodge_integrals() {
    let e = Engine::new();
    for (g, extras) in [(1u32, vec![0u32]), (1, vec![1]), (2, vec![]), (2, vec![2]), (2, vec![0, 1]), (3, vec![4])] {
        let u_max = g as usize + 1;
        let max_edges = (3 * g as usize + extras.len()).saturating_sub(3);
        let checks = check_feynman(&e, g, u_max, &extras, max_edges, Perturb::default()).unwrap();
        for c in &checks {
            assert!(c.pass, "g={g} extras {extras:?} i={} route {}: {} vs {}", c.i, c.route, c.computed, c.expected);
        }
        // only the homogeneous degree can survive
        let d = homogeneous_degree(g, &extras);
        for c in checks.iter().filter(|c| c.i as i64 != d) {
            assert!(c.computed.is_zero());
        }
    }
}

#[test]
fn genus_two_top_coefficients() {
    let e = Engine::new();
    let s = feynman_sum(&e, 2, 4, &[2], 3, Perturb::default()).unwrap();
    assert_eq!(s[2], rat(7, 5760));
    assert_eq!(s[2], lambda_side(&e, 2, &[2], 2));
    let s = feynman_sum(&e, 2, 4, &[], 3, Perturb::default()).unwrap();
    assert!(s.iter().all(|x| x.is_zero()));
}

#[test]
fn perturbed_expansions_fail() {
    let e = Engine::new();
    for p in [
        Perturb { r_coefficient: true, v00: false },
        Perturb { r_coefficient: false, v00: true },
    ] {
        for (g, extras) in [(1u32, vec![0u32]), (2, vec![2])] {
            let max_edges = (3 * g as usize + extras.len()).saturating_sub(3);
            let checks = check_feynman(&e, g, g as usize + 1, &extras, max_edges, p).unwrap();
            assert!(checks.iter().any(|c| !c.pass), "{p:?} g={g}");
        }
    }
}

#[test]
fn d_operator_matches_ch_correlators() {
    let e = Engine::new();
    for (l, depth, max_index, max_genus) in [(1, 3, 2, 2), (2, 2, 3, 2)] {
        let r = d_operator_check(&e, l, depth, max_index, max_genus).unwrap();
        assert!(r.pass, "l={l}: {:?}", r.jets.iter().find(|j| !j.pass));
        assert!(r.nonzero > 0, "l={l} saw only zeros");
    }
    assert!(d_operator_check(&e, 0, 1, 1, 1).is_err());
}

#[test]
fn d_operators_commute() {
    let e = Engine::new();
    let (count, ok) = d_commutation_check(&e, 1, 2, 2, 2, 2).unwrap();
    assert!(ok);
    assert!(count > 0);
    assert!(d_commutation_check(&e, 0, 1, 1, 1, 1).is_err());
}

#[test]
fn invalid_truncations() {
    let e = Engine::new();
    assert!(r_matrix(0, 3).is_err());
    assert!(feynman_sum(&e, 1, 0, &[0], 1, Perturb::default()).is_err());
    assert_eq!(r_matrix(2, 2).unwrap().series.coeff(1, 1), int(1) / int(12));
}
