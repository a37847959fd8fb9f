use drhodge::exact::{factorial_q, int, interpolate, sign};
use drhodge::graphs::{enumerate_circular, enumerate_stable};
use drhodge::pixton::{circular_contribution, graph_constant_term, graph_contribution, weightings};
use drhodge::strata::{integrate, multiply_divisor, Divisor, HodgeFactor, TautClass};
use drhodge::{Engine, Rational};
use proptest::prelude::*;

fn times_psi(e: &Engine, c: &TautClass, i: usize, k: u32) -> TautClass {
    (0..k).fold(c.clone(), |acc, _| multiply_divisor(e, &acc, &Divisor::Psi(i)).unwrap())
}

#[test]
fn weighting_counts_are_powers_of_r() {
    for (g, a) in [(1u32, vec![3i64, -3]), (2, vec![0]), (2, vec![2, -1, -1]), (3, vec![])] {
        for gr in enumerate_stable(g, a.len()).unwrap() {
            for r in [5u64, 7, 8] {
                let n = weightings(&gr, &a, r).len() as u64;
                assert_eq!(n, r.pow(gr.h1()), "{gr} r={r}");
            }
        }
    }
}

#[test]
fn weightings_are_balanced() {
    let a = [2i64, -1, -1];
    let r = 6u64;
    for gr in enumerate_stable(1, 3).unwrap() {
        for w in weightings(&gr, &a, r) {
            for (i, &ai) in a.iter().enumerate() {
                assert_eq!(w[i] as i64, ai.rem_euclid(r as i64));
            }
            for e in 0..gr.num_edges() {
                let (h, k) = gr.edge_half_edges(e);
                assert_eq!((w[h] + w[k]) % r, 0);
            }
            for v in 0..gr.num_vertices() {
                let s: u64 = gr.half_edges_at(v).iter().map(|&h| w[h]).sum();
                assert_eq!(s % r, 0);
            }
        }
    }
}

/// Even coefficients of sinh(z/2)/(z/2) scaled by a: [z^{2k}] S(az).
fn s_series(a: i64, terms: usize) -> Vec<Rational> {
    (0..terms as u32)
        .map(|k| int(a).pow(2 * k as i32) / (int(4).pow(k as i32) * factorial_q(2 * k + 1)))
        .collect()
}

/// [z^{2g}] S(az)/S(z), the psi-power integral over DR_g(a, -a).
fn dr_psi_oracle(g: u32, a: i64) -> Rational {
    let n = g as usize + 1;
    let num = s_series(a, n);
    let den = s_series(1, n);
    let mut q: Vec<Rational> = Vec::with_capacity(n);
    for k in 0..n {
        let mut c = num[k].clone();
        for j in 0..k {
            c -= &q[j] * &den[k - j];
        }
        q.push(c / &den[0]);
    }
    q[g as usize].clone()
}

#[test]
fn dr_against_psi_power() {
    let e = Engine::new();
    for g in 1..=2u32 {
        for a in 1..=3i64 {
            let dr = e.dr_cycle(g, &[a, -a]).unwrap();
            let value = integrate(&e, &times_psi(&e, &dr, 1, 2 * g - 1)).unwrap();
            assert_eq!(value, dr_psi_oracle(g, a), "g={g} a={a}");
        }
    }
}

#[test]
fn dr_at_zero_profile_pairs_like_top_lambda() {
    let e = Engine::new();
    for (g, n) in [(1u32, 1usize), (1, 2), (2, 1), (2, 2)] {
        let dr = e.dr_cycle(g, &vec![0; n]).unwrap();
        let rest = 2 * g + n as u32 - 3;
        let mut psi = vec![0u32; n];
        psi[0] = rest;
        let direct = sign(g as i64) * e.hodge_integral(g, &psi, &[HodgeFactor::Lambda(g)]);
        assert_eq!(integrate(&e, &times_psi(&e, &dr, 1, rest)).unwrap(), direct, "({g},{n})");
    }
}

#[test]
fn degrees_above_genus_vanish() {
    let e = Engine::new();
    for a in 1..=2i64 {
        let p = e.p_class(1, &[a, -a], 2).unwrap();
        assert_eq!(integrate(&e, &p).unwrap(), int(0));
    }
    let p = e.p_class(2, &[1, -1], 3).unwrap();
    assert_eq!(integrate(&e, &times_psi(&e, &p, 1, 2)).unwrap(), int(0));
    let p = e.p_class(2, &[], 3).unwrap();
    assert_eq!(integrate(&e, &p).unwrap(), int(0));
}

#[test]
fn circular_closed_form_matches_interpolation() {
    for g in 2..=4 {
        for gr in enumerate_circular(g) {
            assert_eq!(circular_contribution(&gr).unwrap(), graph_constant_term(&gr, &[], g).unwrap(), "{gr}");
        }
    }
}

#[test]
fn fixed_r_contributions_are_polynomial() {
    let d = 2;
    for gr in enumerate_stable(2, 0).unwrap().into_iter().filter(|x| x.num_edges() <= d as usize) {
        let rs: Vec<u64> = (0..(2 * d as u64 + gr.h1() as u64 + 3)).map(|i| 40 + i).collect();
        let samples: Vec<TautClass> = rs.iter().map(|&r| graph_contribution(&gr, &[], d, r).unwrap()).collect();
        let target = graph_constant_term(&gr, &[], d).unwrap();
        let mut terms: Vec<_> = samples.iter().flat_map(|c| c.terms().into_iter().map(|(t, _)| t)).collect();
        terms.sort();
        terms.dedup();
        for t in terms {
            let pts: Vec<(Rational, Rational)> = rs
                .iter()
                .zip(&samples)
                .map(|(&r, c)| (int(r as i64), c.coefficient(&t)))
                .collect();
            let poly = interpolate(&pts).unwrap();
            assert!(poly.degree().unwrap_or(0) < pts.len() - 1, "{gr}: not polynomial of low degree");
            assert_eq!(poly.constant_term(), target.coefficient(&t), "{gr}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn dr_genus_one_is_quadratic_in_profile(a in -6i64..=6, b in -6i64..=6) {
        let e = Engine::new();
        let profile = [a, b, -a - b];
        let dr = e.dr_cycle(1, &profile).unwrap();
        let value = integrate(&e, &times_psi(&e, &dr, 1, 1)).unwrap();
        let at = |s: i64| {
            let p = [s * a, s * b, -s * (a + b)];
            integrate(&e, &times_psi(&e, &e.dr_cycle(1, &p).unwrap(), 1, 1)).unwrap()
        };
        // homogeneous of degree 2 up to the constant part at zero
        let zero = at(0);
        prop_assert_eq!(at(2) - &zero, (value.clone() - &zero) * int(4));
        prop_assert_eq!(at(-1), value);
    }
}
