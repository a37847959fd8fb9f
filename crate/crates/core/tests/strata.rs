use drhodge::exact::{int, rat};
use drhodge::graphs::{enumerate_stable, StableGraph};
use drhodge::strata::{
    integrate, multiply_divisor, parse_class, push_forward, BoundaryType, Decorated, Divisor, HodgeFactor, TautClass,
};
use drhodge::Engine;
use proptest::prelude::*;

fn times(e: &Engine, c: &TautClass, divs: &[Divisor]) -> TautClass {
    divs.iter().fold(c.clone(), |acc, d| multiply_divisor(e, &acc, d).unwrap())
}

fn sep(g: u32, n: usize, h: u32, ms: &[usize]) -> Divisor {
    Divisor::Boundary(BoundaryType::separating(g, n, h, ms))
}

#[test]
fn divisor_numbers_on_m04() {
    let e = Engine::new();
    let one = TautClass::fundamental(0, 4);
    assert_eq!(integrate(&e, &times(&e, &one, &[Divisor::Psi(1)])).unwrap(), int(1));
    assert_eq!(integrate(&e, &times(&e, &one, &[Divisor::Kappa1])).unwrap(), int(1));
    assert_eq!(integrate(&e, &times(&e, &one, &[sep(0, 4, 0, &[1, 2])])).unwrap(), int(1));
}

#[test]
fn divisor_numbers_on_m05() {
    let e = Engine::new();
    let one = TautClass::fundamental(0, 5);
    let d12 = sep(0, 5, 0, &[1, 2]);
    let d34 = sep(0, 5, 0, &[3, 4]);
    let d13 = sep(0, 5, 0, &[1, 3]);
    assert_eq!(integrate(&e, &times(&e, &one, &[d12.clone(), d12.clone()])).unwrap(), int(-1));
    assert_eq!(integrate(&e, &times(&e, &one, &[d12.clone(), d34])).unwrap(), int(1));
    assert_eq!(integrate(&e, &times(&e, &one, &[d12.clone(), d13])).unwrap(), int(0));
    assert_eq!(integrate(&e, &times(&e, &one, &[Divisor::Kappa1, Divisor::Kappa1])).unwrap(), int(5));
    assert_eq!(integrate(&e, &times(&e, &one, &[Divisor::Psi(1), Divisor::Psi(2)])).unwrap(), int(2));
    assert_eq!(integrate(&e, &times(&e, &one, &[Divisor::Psi(1), d12])).unwrap(), int(0));
}

#[test]
fn genus_one_divisors() {
    let e = Engine::new();
    let one = TautClass::fundamental(1, 1);
    let irr = Divisor::Boundary(BoundaryType::Irr);
    let d = integrate(&e, &times(&e, &one, &[irr])).unwrap();
    let psi = integrate(&e, &times(&e, &one, &[Divisor::Psi(1)])).unwrap();
    assert_eq!(d, rat(1, 2));
    assert_eq!(psi, d / int(12));
}

#[test]
fn psi_times_psi_matches_intersection_number() {
    let e = Engine::new();
    let one = TautClass::fundamental(1, 2);
    let via = integrate(&e, &times(&e, &one, &[Divisor::Psi(1), Divisor::Psi(2)])).unwrap();
    assert_eq!(via, e.psi_integral(1, &[1, 1]).unwrap());
    let one = TautClass::fundamental(2, 1);
    let via = integrate(&e, &times(&e, &one, &vec![Divisor::Psi(1); 4])).unwrap();
    assert_eq!(via, rat(1, 1152));
}

#[test]
fn boundary_pushforward_integrates_to_vertex_product() {
    let e = Engine::new();
    // M_{1,1} x M_{1,1} glued into M_2, with psi on each side
    let gr = StableGraph::new(vec![1, 1], vec![], vec![(0, 1)]).unwrap();
    let side = parse_class("M(1,1) psi{1:1}").unwrap();
    let pushed = push_forward(&gr, &[side.clone(), side]).unwrap();
    assert_eq!(pushed.genus(), 2);
    assert_eq!(integrate(&e, &pushed).unwrap(), rat(1, 576));
    let loop_graph = StableGraph::new(vec![0], vec![0], vec![(0, 0)]).unwrap();
    let pushed = push_forward(&loop_graph, &[TautClass::fundamental(0, 3)]).unwrap();
    assert_eq!(integrate(&e, &pushed).unwrap(), int(1));
}

#[test]
fn text_round_trip_of_lambda_classes() {
    let e = Engine::new();
    for (g, n) in [(1, 1), (1, 2), (2, 0), (2, 1), (3, 0)] {
        let c = e.lambda_class(g, n).unwrap();
        let again = parse_class(&c.to_string()).unwrap();
        assert_eq!(*c, again, "({g},{n})");
    }
}

#[test]
fn lambda_class_integrates_like_hodge_integral() {
    let e = Engine::new();
    for (g, n) in [(1u32, 1usize), (2, 1), (2, 2), (3, 1)] {
        let c = e.lambda_class(g, n).unwrap();
        let rest = 2 * g + n as u32 - 3;
        let mut psi = vec![0u32; n];
        psi[0] = rest;
        let with_psi = times(&e, &c, &vec![Divisor::Psi(1); rest as usize]);
        let direct = e.hodge_integral(g, &psi, &[HodgeFactor::Lambda(g)]);
        assert_eq!(integrate(&e, &with_psi).unwrap(), direct, "({g},{n})");
    }
}

#[test]
fn parse_errors() {
    for bad in ["M(1,1) psi{1:", "M(0,2)", "1/0 * M(1,1) psi{1:1}", "Graph[vertices:[1], legs:[(1,3)], edges:[]]"] {
        assert!(parse_class(bad).is_err(), "{bad}");
    }
}

fn decorated_strategy() -> impl Strategy<Value = (u32, usize, usize, Vec<u32>, u32, bool)> {
    prop_oneof![Just((1u32, 2usize)), Just((2, 0)), Just((2, 1)), Just((0, 5))].prop_flat_map(|(g, n)| {
        let count = enumerate_stable(g, n).unwrap().len();
        (
            Just(g),
            Just(n),
            0..count,
            proptest::collection::vec(0u32..3, 0..8),
            0u32..3,
            any::<bool>(),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn decorated_terms_round_trip((g, n, idx, psis, kappa, hodge) in decorated_strategy(), num in -50i64..50, den in 1i64..50) {
        prop_assume!(num != 0);
        let graph = enumerate_stable(g, n).unwrap()[idx].clone();
        let mut d = Decorated::new(graph.clone());
        for (h, p) in d.psi.iter_mut().enumerate() {
            *p = psis.get(h).copied().unwrap_or(0);
        }
        let v = graph.num_vertices() - 1;
        if kappa > 0 {
            d.vertex[v].kappa = vec![kappa];
        }
        if hodge && graph.vertex_genus(v) > 0 {
            d.vertex[v].hodge = vec![HodgeFactor::Lambda(1)];
        }
        let c = TautClass::from_terms(g, n, [(d, rat(num, den))]);
        let again = parse_class(&c.to_string()).unwrap();
        prop_assert_eq!(c, again);
    }

    #[test]
    fn multiplication_by_divisors_commutes(i in 0usize..4, j in 0usize..4) {
        let e = Engine::new();
        let divs = [
            Divisor::Kappa1,
            Divisor::Psi(1),
            Divisor::Boundary(BoundaryType::Irr),
            sep(1, 2, 0, &[1, 2]),
        ];
        let one = TautClass::fundamental(1, 2);
        let ab = integrate(&e, &times(&e, &one, &[divs[i].clone(), divs[j].clone()])).unwrap();
        let ba = integrate(&e, &times(&e, &one, &[divs[j].clone(), divs[i].clone()])).unwrap();
        prop_assert_eq!(ab, ba);
    }
}
