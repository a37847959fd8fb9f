//! Reference coefficient tables shipped with the crate.

use serde::Serialize;

use crate::strata::{parse_class, TautClass};

const LAMBDA_1_1: &str = include_str!("../data/lambda_1_1.txt");
const LAMBDA_1_2: &str = include_str!("../data/lambda_1_2.txt");
const LAMBDA_2: &str = include_str!("../data/lambda_2.txt");
const LAMBDA_3: &str = include_str!("../data/lambda_3.txt");
const PRODUCT_2: &str = include_str!("../data/lambda_product_2.txt");
const PRODUCT_3: &str = include_str!("../data/lambda_product_3.txt");
const PRODUCT_4: &str = include_str!("../data/lambda_product_4.txt");

fn parse(text: &str) -> TautClass {
    parse_class(text).expect("shipped table parses")
}

/// Expected expansion of lambda_g on M_{g,n}.
pub fn lambda(g: u32, n: usize) -> Option<TautClass> {
    match (g, n) {
        (1, 1) => Some(parse(LAMBDA_1_1)),
        (1, 2) => Some(parse(LAMBDA_1_2)),
        (2, 0) => Some(parse(LAMBDA_2)),
        (3, 0) => Some(parse(LAMBDA_3)),
        _ => None,
    }
}

/// Expected circular-graph side of lambda_g lambda_{g-1} on M_g.
pub fn lambda_product(g: u32) -> Option<TautClass> {
    match g {
        2 => Some(parse(PRODUCT_2)),
        3 => Some(parse(PRODUCT_3)),
        4 => Some(parse(PRODUCT_4)),
        _ => None,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Mismatch {
    pub term: String,
    pub expected: String,
    pub computed: String,
}

/// Terms whose coefficients differ between two classes.
pub fn compare(expected: &TautClass, computed: &TautClass) -> Vec<Mismatch> {
    let mut keys: Vec<_> = expected.iter().map(|(d, _)| d.clone()).collect();
    keys.extend(computed.iter().map(|(d, _)| d.clone()));
    keys.sort();
    keys.dedup();
    keys.into_iter()
        .filter_map(|d| {
            let e = expected.coefficient(&d);
            let c = computed.coefficient(&d);
            (e != c).then(|| Mismatch {
                term: d.to_string(),
                expected: e.to_string(),
                computed: c.to_string(),
            })
        })
        .collect()
}
