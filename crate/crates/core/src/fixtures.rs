//! Built-in moment polytopes used by the examples and the test suite.

use num_bigint::BigInt;

use crate::num::rat;
use crate::polytope::{DelzantPolytope, Facet};
use crate::Rat;

fn facet(normal: &[i64], offset: Rat) -> Facet {
    Facet {
        normal: normal.iter().map(|&u| BigInt::from(u)).collect(),
        offset,
    }
}

/// Moment square `[0, 1/2]²` of ℂP¹×ℂP¹ with the Fubini-Study normalization
/// `μ_j = |z_j|²/2(1+|z_j|²)`.
pub fn cp1xcp1_square() -> DelzantPolytope {
    DelzantPolytope::new(
        2,
        vec![
            facet(&[1, 0], rat(0, 1)),
            facet(&[-1, 0], rat(-1, 2)),
            facet(&[0, 1], rat(0, 1)),
            facet(&[0, -1], rat(-1, 2)),
        ],
        Some("cp1xcp1".into()),
    )
    .expect("fixture is valid")
}

/// Moment triangle of ℂP² with facet normals (1,0), (0,1), (−1,−1).
pub fn cp2_triangle() -> DelzantPolytope {
    DelzantPolytope::new(
        2,
        vec![
            facet(&[1, 0], rat(0, 1)),
            facet(&[0, 1], rat(0, 1)),
            facet(&[-1, -1], rat(-1, 1)),
        ],
        Some("cp2".into()),
    )
    .expect("fixture is valid")
}

/// Unit cube `[0,1]³`, a handy 3d Delzant fixture.
pub fn cube() -> DelzantPolytope {
    DelzantPolytope::new(
        3,
        vec![
            facet(&[1, 0, 0], rat(0, 1)),
            facet(&[-1, 0, 0], rat(-1, 1)),
            facet(&[0, 1, 0], rat(0, 1)),
            facet(&[0, -1, 0], rat(-1, 1)),
            facet(&[0, 0, 1], rat(0, 1)),
            facet(&[0, 0, -1], rat(-1, 1)),
        ],
        Some("cube".into()),
    )
    .expect("fixture is valid")
}

/// Standard simplex `{x ≥ 0, Σx ≤ 1}` in dimension n (ℂPⁿ moment polytope).
pub fn simplex(n: usize) -> DelzantPolytope {
    let mut facets = Vec::new();
    for i in 0..n {
        let mut u = vec![0i64; n];
        u[i] = 1;
        facets.push(facet(&u, rat(0, 1)));
    }
    facets.push(facet(&vec![-1i64; n], rat(-1, 1)));
    DelzantPolytope::new(n, facets, Some(format!("cp{n}"))).expect("fixture is valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_are_delzant() {
        assert!(cp1xcp1_square().delzant_report().pass);
        assert!(cp2_triangle().delzant_report().pass);
        assert!(cube().delzant_report().pass);
        assert!(simplex(3).delzant_report().pass);
    }
}
