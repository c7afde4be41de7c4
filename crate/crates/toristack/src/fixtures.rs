//! The bundled example inputs, one per worked example, as document
//! builders. The JSON files under `fixtures/` hold the same data; a test
//! pins file and builder together.

use crate::input::{FacetInput, InputDocument, JsonInt, JsonRat, PolytopeInput, StackyFanInput};
use toristack_core::{int, rat};

fn facet(normal: &[i64], eta_num: i64, eta_den: i64, label: u32) -> FacetInput {
    FacetInput {
        normal: normal.iter().map(|&v| JsonInt(int(v))).collect(),
        eta: JsonRat(rat(eta_num, eta_den)),
        label,
    }
}

/// Triangle of the projective plane with labels (1, 1, 2).
pub fn p2_labels_1_1_2() -> InputDocument {
    InputDocument::Polytope(PolytopeInput {
        dim: 2,
        facets: vec![
            facet(&[1, 0], 0, 1, 1),
            facet(&[0, 1], 0, 1, 1),
            facet(&[-1, -1], 1, 1, 2),
        ],
    })
}

/// The same triangle with labels (2, 2, 2).
pub fn p2_labels_2_2_2() -> InputDocument {
    InputDocument::Polytope(PolytopeInput {
        dim: 2,
        facets: vec![
            facet(&[1, 0], 0, 1, 2),
            facet(&[0, 1], 0, 1, 2),
            facet(&[-1, -1], 1, 1, 2),
        ],
    })
}

/// Trivially labelled triangle of the weighted projective plane P(1,1,2).
pub fn wp112() -> InputDocument {
    InputDocument::Polytope(PolytopeInput {
        dim: 2,
        facets: vec![
            facet(&[1, 0], 0, 1, 1),
            facet(&[0, 1], 0, 1, 1),
            facet(&[-1, -2], 2, 1, 1),
        ],
    })
}

/// Unit interval with label `k` at the origin: the `k`-conehead.
pub fn conehead(k: u32) -> InputDocument {
    InputDocument::Polytope(PolytopeInput {
        dim: 1,
        facets: vec![facet(&[1], 0, 1, k), facet(&[-1], 1, 1, 1)],
    })
}

/// Unit interval with trivial labels (the projective line).
pub fn interval_unlabelled() -> InputDocument {
    conehead(1)
}

/// The fan of the projective plane as a direct stacky-fan input with labels
/// (1, 1, 2).
pub fn p2_fan_document() -> InputDocument {
    InputDocument::StackyFan(StackyFanInput {
        dim: 2,
        rays: vec![
            vec![JsonInt(int(1)), JsonInt(int(0))],
            vec![JsonInt(int(0)), JsonInt(int(1))],
            vec![JsonInt(int(-1)), JsonInt(int(-1))],
        ],
        max_cones: vec![vec![1, 2], vec![2, 3], vec![1, 3]],
        labels: vec![1, 1, 2],
    })
}

/// Two half-planes only; the intersection is a cone, not a polytope.
pub fn unbounded_document() -> InputDocument {
    InputDocument::Polytope(PolytopeInput {
        dim: 2,
        facets: vec![facet(&[1, 0], 0, 1, 1), facet(&[0, 1], 0, 1, 1)],
    })
}

/// Name and builder for every fixture shipped as a file.
pub fn bundled() -> Vec<(&'static str, InputDocument)> {
    vec![
        ("p2_labels_1_1_2", p2_labels_1_1_2()),
        ("p2_labels_2_2_2", p2_labels_2_2_2()),
        ("wp112", wp112()),
        ("conehead_4", conehead(4)),
        ("interval_unlabelled", interval_unlabelled()),
    ]
}
