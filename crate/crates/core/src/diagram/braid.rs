use std::fmt;

use super::{Arc, Diagram, DiagramError, OrientedCrossing, OrientedDiagram, Sign};

/// A braid word: letter `k` is the generator σ_|k| with the sign of `k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BraidWord {
    letters: Vec<i32>,
    strands: usize,
}

impl BraidWord {
    pub fn new(letters: Vec<i32>, strands: usize) -> Result<Self, DiagramError> {
        if strands == 0 {
            return Err(DiagramError::MalformedBraid("at least one strand is required".into()));
        }
        for &l in &letters {
            if l == 0 {
                return Err(DiagramError::ZeroLetter);
            }
            if l.unsigned_abs() as usize >= strands {
                return Err(DiagramError::GeneratorOutOfRange { letter: l, strands });
            }
        }
        Ok(BraidWord { letters, strands })
    }

    pub fn letters(&self) -> &[i32] {
        &self.letters
    }

    pub fn strands(&self) -> usize {
        self.strands
    }

    /// The permutation of strand positions induced by the word.
    pub fn permutation(&self) -> Vec<usize> {
        let mut at: Vec<usize> = (0..self.strands).collect();
        for &l in &self.letters {
            let i = l.unsigned_abs() as usize - 1;
            at.swap(i, i + 1);
        }
        at
    }
}

impl fmt::Display for BraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "strands={};", self.strands)?;
        for l in &self.letters {
            write!(f, " {l}")?;
        }
        Ok(())
    }
}

/// Parses `strands=<n>; <int> <int> ...` (letters separated by whitespace
/// or commas).
pub fn parse_braid(text: &str) -> Result<BraidWord, DiagramError> {
    let bad = |m: &str| DiagramError::MalformedBraid(format!("{m} in {text:?}"));
    let (head, body) = text.split_once(';').ok_or_else(|| bad("missing ';'"))?;
    let (key, value) = head.split_once('=').ok_or_else(|| bad("expected strands=<n>"))?;
    if key.trim() != "strands" {
        return Err(bad("expected strands=<n>"));
    }
    let strands: usize = value.trim().parse().map_err(|_| bad("bad strand count"))?;
    let letters = body
        .split(|c: char| c.is_whitespace() || c == ',')
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<i32>().map_err(|_| bad(&format!("bad letter {t:?}"))))
        .collect::<Result<Vec<_>, _>>()?;
    BraidWord::new(letters, strands)
}

/// The closure of a braid, drawn top to bottom. Strands that no letter
/// touches become free circles.
pub fn braid_closure(word: &BraidWord) -> Diagram {
    let n = word.strands;
    let mut cur: Vec<Arc> = (1..=n as Arc).collect();
    let mut next = n as Arc + 1;
    let mut crossings = Vec::with_capacity(word.letters.len());
    for &l in &word.letters {
        let i = l.unsigned_abs() as usize - 1;
        let (in_left, in_right) = (cur[i], cur[i + 1]);
        let (out_left, out_right) = (next, next + 1);
        next += 2;
        crossings.push(if l > 0 {
            OrientedCrossing { arcs: [in_left, in_right, out_right, out_left], sign: Sign::Positive }
        } else {
            OrientedCrossing { arcs: [in_right, out_right, out_left, in_left], sign: Sign::Negative }
        });
        cur[i] = out_left;
        cur[i + 1] = out_right;
    }
    let joins: Vec<(Arc, Arc)> = cur.iter().enumerate().map(|(p, &bottom)| (bottom, p as Arc + 1)).collect();
    OrientedDiagram::join_arcs(crossings, next as usize - 1, &joins, 0).to_diagram()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_words() {
        let b = parse_braid("strands=2; 1 1 1").unwrap();
        assert_eq!(b.letters(), &[1, 1, 1]);
        assert_eq!(b.strands(), 2);
        assert_eq!(parse_braid("strands=2; 1 1 1 1 1 1 1").unwrap().letters().len(), 7);
        assert_eq!(parse_braid("strands = 3 ; 1,-2, 1").unwrap().letters(), &[1, -2, 1]);
        assert_eq!(parse_braid("strands=1;").unwrap().letters(), &[] as &[i32]);
    }

    #[test]
    fn parse_errors() {
        assert_eq!(parse_braid("strands=2; 0"), Err(DiagramError::ZeroLetter));
        assert_eq!(parse_braid("strands=2; 2"), Err(DiagramError::GeneratorOutOfRange { letter: 2, strands: 2 }));
        assert_eq!(parse_braid("strands=3; -3"), Err(DiagramError::GeneratorOutOfRange { letter: -3, strands: 3 }));
        assert!(matches!(parse_braid("1 1 1"), Err(DiagramError::MalformedBraid(_))));
        assert!(matches!(parse_braid("strands=0;"), Err(DiagramError::MalformedBraid(_))));
        assert!(matches!(parse_braid("strands=2; x"), Err(DiagramError::MalformedBraid(_))));
    }

    #[test]
    fn closure_shapes() {
        let t = braid_closure(&parse_braid("strands=2; 1 1 1").unwrap());
        assert_eq!(t.crossing_count(), 3);
        assert_eq!(t.components(), 1);
        assert!(t.is_positive().unwrap());
        assert_eq!(t.a_state_circles(), 2);
        assert_eq!(t.b_state_circles(), 3);

        let u = braid_closure(&parse_braid("strands=1;").unwrap());
        assert_eq!(u, Diagram::unknot());

        let hopf = braid_closure(&parse_braid("strands=2; 1 1").unwrap());
        assert_eq!(hopf.components(), 2);

        let kink = braid_closure(&parse_braid("strands=2; 1").unwrap());
        assert_eq!(kink.components(), 1);
        assert_eq!(kink.crossing_count(), 1);

        let neg = braid_closure(&parse_braid("strands=2; -1 -1 -1").unwrap());
        assert_eq!(neg.crossing_signs().unwrap().negative(), 3);

        let spare = braid_closure(&parse_braid("strands=3; 1 1 1").unwrap());
        assert_eq!(spare.free_circles(), 1);
        assert_eq!(spare.components(), 2);
    }
}
