//! Conway polynomial by skein recursion on descending diagrams.

use std::collections::HashMap;

use thiserror::Error;

use crate::diagram::{Diagram, DiagramError, OrientedCrossing, OrientedDiagram, Sign};
use crate::laurent::{HalfInt, LaurentPoly};

pub const DEFAULT_SKEIN_BUDGET: usize = 1_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConwayError {
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error("skein recursion visited more than {budget} diagrams")]
    RecursionBudgetExceeded { budget: usize },
}

pub fn conway(d: &Diagram) -> Result<LaurentPoly, ConwayError> {
    conway_with_budget(d, DEFAULT_SKEIN_BUDGET)
}

pub fn conway_with_budget(d: &Diagram, budget: usize) -> Result<LaurentPoly, ConwayError> {
    let od = d.orient()?;
    conway_oriented(&od, budget)
}

pub fn conway_oriented(od: &OrientedDiagram, budget: usize) -> Result<LaurentPoly, ConwayError> {
    let mut skein = Skein { memo: HashMap::new(), nodes: 0, budget };
    skein.eval(od)
}

/// Top-degree coefficient of the Conway polynomial; 0 for split links.
pub fn lead_coeff_conway(d: &Diagram) -> Result<i64, ConwayError> {
    Ok(conway(d)?.lead_coeff().map(crate::laurent::small).unwrap_or(0))
}

struct Skein {
    memo: HashMap<Vec<(OrientedCrossing, u8)>, LaurentPoly>,
    nodes: usize,
    budget: usize,
}

impl Skein {
    fn eval(&mut self, d: &OrientedDiagram) -> Result<LaurentPoly, ConwayError> {
        if d.crossing_count() == 0 {
            return Ok(if d.free_circles() == 1 { LaurentPoly::one() } else { LaurentPoly::zero() });
        }
        if d.free_circles() > 0 {
            return Ok(LaurentPoly::zero());
        }
        let Some(key) = d.canonical_key() else {
            return Ok(LaurentPoly::zero());
        };
        if let Some(v) = self.memo.get(&key) {
            return Ok(v.clone());
        }
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(ConwayError::RecursionBudgetExceeded { budget: self.budget });
        }
        let value = match d.first_descent_defect() {
            None => {
                if d.components() == 1 {
                    LaurentPoly::one()
                } else {
                    LaurentPoly::zero()
                }
            }
            Some(k) => {
                let switched = self.eval(&d.switch(k))?;
                let resolved = self.eval(&d.resolve(k))?;
                let z = LaurentPoly::monomial(1, HalfInt::from_int(1));
                let zr = &z * &resolved;
                match d.crossings()[k].sign {
                    Sign::Positive => &switched + &zr,
                    Sign::Negative => &switched - &zr,
                }
            }
        };
        self.memo.insert(key, value.clone());
        Ok(value)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::{braid_closure, parse_braid, parse_pd};
    use crate::jones::jones_polynomial;
    use num_bigint::BigInt;

    fn z(s: &str) -> LaurentPoly {
        LaurentPoly::parse(s, 'z').unwrap()
    }

    fn closure(s: &str) -> Diagram {
        braid_closure(&parse_braid(s).unwrap())
    }

    #[test]
    fn base_cases() {
        assert_eq!(conway(&Diagram::unknot()).unwrap(), LaurentPoly::one());
        assert_eq!(conway(&Diagram::unlink(2)).unwrap(), LaurentPoly::zero());
        assert_eq!(conway(&closure("strands=2; 1")).unwrap(), LaurentPoly::one());
        assert_eq!(conway(&closure("strands=3; 1")).unwrap(), LaurentPoly::zero());
    }

    #[test]
    fn small_links() {
        assert_eq!(conway(&closure("strands=2; 1 1")).unwrap(), z("z"));
        assert_eq!(conway(&closure("strands=2; -1 -1")).unwrap(), z("-z"));
        let trefoil = parse_pd("PD[X[1,4,2,5],X[3,6,4,1],X[5,2,6,3]]").unwrap();
        assert_eq!(conway(&trefoil).unwrap(), z("1 + z^2"));
        assert_eq!(lead_coeff_conway(&trefoil).unwrap(), 1);
        // figure eight
        assert_eq!(conway(&closure("strands=3; 1 -2 1 -2")).unwrap(), z("1 - z^2"));
    }

    #[test]
    fn budget_is_enforced() {
        let d = closure("strands=3; 1 -2 1 -2 1 -2");
        assert_eq!(conway_with_budget(&d, 1), Err(ConwayError::RecursionBudgetExceeded { budget: 1 }));
    }

    #[test]
    fn knots_agree_with_jones_at_minus_one() {
        // |V(-1)| = |Delta(-1)| = |nabla(2i)|
        for w in ["strands=2; 1 1 1 1 1", "strands=3; 1 1 2 1 1 2", "strands=3; 1 -2 1 -2", "strands=4; 1 2 -3 1 2 2 -3"] {
            let d = closure(w);
            if d.components() != 1 {
                continue;
            }
            let nabla = conway(&d).unwrap();
            let at = nabla.terms().fold(BigInt::from(0), |acc, (e, c)| {
                let k = e.to_int().unwrap();
                assert_eq!(k % 2, 0);
                acc + c * BigInt::from(-4).pow((k / 2) as u32)
            });
            let v = jones_polynomial(&d).unwrap().eval_int(-1).unwrap();
            assert_eq!(at.magnitude(), v.magnitude(), "{w}");
        }
    }
}
