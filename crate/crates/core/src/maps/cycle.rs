use super::{apply_piece, cycle_matrix, jacobian, MapError, Matrix2, NormalFormParams, PlanePoint, Side, Word};

/// A periodic solution with a prescribed itinerary.
#[derive(Debug, Clone, PartialEq)]
pub struct CycleSolution {
    pub word: Word,
    /// `points[i]` is mapped by the piece `word[i]` to `points[i + 1]`.
    pub points: Vec<PlanePoint>,
    /// Product of the piece Jacobians around the cycle.
    pub matrix: Matrix2,
    /// Every point lies strictly on the side named by its symbol.
    pub admissible: bool,
    /// Indices of points lying exactly on the switching line.
    pub on_boundary: Vec<usize>,
}

impl CycleSolution {
    pub fn period(&self) -> usize {
        self.points.len()
    }

    pub fn multipliers(&self) -> super::EigenPair {
        self.matrix.eigenvalues()
    }

    pub fn is_stable(&self) -> bool {
        self.multipliers().spectral_radius() < 1.0
    }
}

const CLOSURE_TOL: f64 = 1e-10;
const SINGULAR_TOL: f64 = 1e-12;

/// Solves for the unique periodic solution following `word`, whether or not
/// it is admissible.
pub fn solve_cycle(word: &Word, params: &NormalFormParams) -> Result<CycleSolution, MapError> {
    // Compose the affine pieces: z -> M z + c.
    let mut m = Matrix2::IDENTITY;
    let mut c = [0.0, 0.0];
    for &s in word.symbols() {
        let a = jacobian(s, params);
        let ac = a.apply(c);
        c = [ac[0] + params.mu, ac[1]];
        m = a * m;
    }
    debug_assert_eq!(m, cycle_matrix(word, params));
    let i_m = Matrix2::IDENTITY - m;
    let det = i_m.det();
    if det.abs() < SINGULAR_TOL * (1.0 + m.frobenius()) {
        return Err(MapError::Singular {
            word: word.to_string(),
            det,
        });
    }
    let v0 = PlanePoint::new(
        (i_m.d * c[0] - i_m.b * c[1]) / det,
        (-i_m.c * c[0] + i_m.a * c[1]) / det,
    );
    let mut points = Vec::with_capacity(word.len());
    let mut z = v0;
    for &s in word.symbols() {
        points.push(z);
        z = apply_piece(s, z, params);
    }
    let residual = z.dist(v0);
    if !(residual <= CLOSURE_TOL * (1.0 + v0.norm())) {
        return Err(MapError::NotClosed {
            word: word.to_string(),
            residual,
        });
    }
    let admissible = points.iter().zip(word.symbols()).all(|(p, s)| match s {
        Side::L => p.x < 0.0,
        Side::R => p.x > 0.0,
    });
    let on_boundary = points
        .iter()
        .enumerate()
        .filter(|(_, p)| p.x == 0.0)
        .map(|(i, _)| i)
        .collect();
    Ok(CycleSolution {
        word: word.clone(),
        points,
        matrix: m,
        admissible,
        on_boundary,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maps::step;
    use proptest::prelude::*;

    #[test]
    fn period_three_cycle_from_introductory_example_is_stable_and_admissible() {
        let pr = NormalFormParams::new(-0.4, -0.55, 2.1, 1.0).unwrap();
        let sol = solve_cycle(&"LLR".parse().unwrap(), &pr).unwrap();
        assert!(sol.admissible);
        assert!(sol.is_stable());
        for i in 0..3 {
            let next = step(sol.points[i], &pr);
            assert!(next.dist(sol.points[(i + 1) % 3]) < 1e-12);
        }
    }

    #[test]
    fn lr_cycle_singular_on_unit_trace_line() {
        let (tl, tr) = (-1.2, 0.7);
        let pr = NormalFormParams::new(tl, tr, tl * tr - 1.0, 1.0).unwrap();
        assert!(matches!(
            solve_cycle(&"LR".parse().unwrap(), &pr),
            Err(MapError::Singular { .. })
        ));
    }

    proptest! {
        #[test]
        fn pieces_close_the_cycle(
            tl in -2.0f64..2.0, tr in -2.0f64..2.0, dr in -2.0f64..2.0,
            mu in prop_oneof![Just(1.0), Just(-1.0)],
            w in "[LR]{1,7}"
        ) {
            let word: Word = w.parse().unwrap();
            let pr = NormalFormParams::new(tl, tr, dr, mu).unwrap();
            if let Ok(sol) = solve_cycle(&word, &pr) {
                let n = sol.period();
                for i in 0..n {
                    let next = apply_piece(word.symbols()[i], sol.points[i], &pr);
                    let tgt = sol.points[(i + 1) % n];
                    prop_assert!(next.dist(tgt) <= 1e-9 * (1.0 + tgt.norm()));
                    if sol.admissible {
                        prop_assert_eq!(step(sol.points[i], &pr), next);
                    }
                }
            }
        }
    }
}
