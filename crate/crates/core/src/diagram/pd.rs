use super::{Arc, Diagram, DiagramError};

struct Cursor<'a> {
    chars: Vec<char>,
    pos: usize,
    text: &'a str,
}

impl<'a> Cursor<'a> {
    fn new(text: &'a str) -> Self {
        Cursor { chars: text.chars().filter(|c| !c.is_whitespace()).collect(), pos: 0, text }
    }

    fn err(&self, what: &str) -> DiagramError {
        DiagramError::MalformedPd(format!("{what} at offset {} in {:?}", self.pos, self.text))
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), DiagramError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(&format!("expected '{c}'")))
        }
    }

    fn label(&mut self) -> Result<Arc, DiagramError> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected a positive integer label"));
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        match s.parse::<Arc>() {
            Ok(0) | Err(_) => Err(self.err("labels must be positive integers")),
            Ok(v) => Ok(v),
        }
    }
}

pub(super) fn parse(text: &str) -> Result<Diagram, DiagramError> {
    let mut cur = Cursor::new(text);
    cur.expect('P')?;
    cur.expect('D')?;
    cur.expect('[')?;
    let mut crossings = Vec::new();
    let mut free = 0;
    loop {
        match cur.peek() {
            Some('X') => {
                cur.pos += 1;
                cur.expect('[')?;
                let mut labels = vec![cur.label()?];
                while cur.eat(',') {
                    labels.push(cur.label()?);
                }
                cur.expect(']')?;
                let arr: [Arc; 4] = labels
                    .as_slice()
                    .try_into()
                    .map_err(|_| DiagramError::Arity { index: crossings.len(), found: labels.len() })?;
                crossings.push(arr);
            }
            Some('O') => {
                cur.pos += 1;
                cur.expect('[')?;
                cur.expect(']')?;
                free += 1;
            }
            _ => return Err(cur.err("expected X[...] or O[]")),
        }
        if cur.eat(']') {
            break;
        }
        cur.expect(',')?;
    }
    if cur.peek().is_some() {
        return Err(cur.err("trailing input"));
    }
    Diagram::new(crossings, free)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_trefoil() {
        let d = parse("PD[X[1,4,2,5], X[3,6,4,1],\n X[5,2,6,3]]").unwrap();
        assert_eq!(d.crossings(), &[[1, 4, 2, 5], [3, 6, 4, 1], [5, 2, 6, 3]]);
        assert_eq!(d.free_circles(), 0);
    }

    #[test]
    fn parses_free_circles() {
        let d = parse("PD[O[]]").unwrap();
        assert_eq!(d.crossing_count(), 0);
        assert_eq!(d.free_circles(), 1);
        let d = parse("PD[X[1,4,2,5],X[3,6,4,1],X[5,2,6,3],O[]]").unwrap();
        assert_eq!(d.free_circles(), 1);
        assert_eq!(d.components(), 2);
    }

    #[test]
    fn arity_errors() {
        assert_eq!(parse("PD[X[1,2,3]]"), Err(DiagramError::Arity { index: 0, found: 3 }));
        assert_eq!(parse("PD[X[1,1,2,2],X[1,2,3,4,5]]"), Err(DiagramError::Arity { index: 1, found: 5 }));
    }

    #[test]
    fn grammar_errors() {
        for bad in ["", "PD[]", "PD[X[1,2,3,4]", "PD[X[1,2,3,4]]x", "PD(X[1,2,3,4])", "PD[X[0,1,1,0]]", "PD[X[a,b,c,d]]", "PD[O[1]]"] {
            assert!(matches!(parse(bad), Err(DiagramError::MalformedPd(_))), "{bad}");
        }
    }

    #[test]
    fn multiplicity_errors() {
        assert!(matches!(parse("PD[X[1,2,3,4]]"), Err(DiagramError::ArcMultiplicity { .. })));
    }
}
