//! Permutations of `{1..n}`: composition, inversion, sign and notation.
//!
//! Points are 1-based at every public entry point. Internally images are
//! stored 0-based in a `Vec<u16>`, which caps the degree at 65535.

use std::fmt;
use std::ops::Add;

use thiserror::Error;

/// Largest supported degree.
pub const MAX_DEGREE: usize = u16::MAX as usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PermError {
    #[error("invalid degree {0}: must be between 1 and {MAX_DEGREE}")]
    InvalidDegree(usize),
    #[error("point {point} is outside 1..={degree}")]
    PointOutOfRange { point: usize, degree: usize },
    #[error("a transposition needs two distinct points, got {0} twice")]
    SamePoint(usize),
    #[error("degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: usize, right: usize },
    #[error("images are not a bijection: {0} appears more than once")]
    NotBijection(usize),
}

/// Errors from [`Permutation::parse`]. Each malformation has its own variant.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error(transparent)]
    Degree(#[from] PermError),
    #[error("point {0} is repeated")]
    RepeatedPoint(usize),
    #[error("point {point} exceeds degree {degree}")]
    PointOutOfRange { point: usize, degree: usize },
    #[error("malformed parentheses at byte {0}")]
    MalformedParentheses(usize),
    #[error("empty cycle at byte {0}")]
    EmptyCycle(usize),
    #[error("invalid token {0:?}")]
    InvalidToken(String),
    #[error("two-line notation needs exactly two rows, found {0}")]
    RowCount(usize),
    #[error("two-line row {row} has {found} entries, expected {expected}")]
    RowLength { row: usize, expected: usize, found: usize },
    #[error("two-line row {row} is not a permutation of 1..={degree}")]
    RowNotBijection { row: usize, degree: usize },
}

/// Sign of a permutation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    /// Parity of a non-negative count.
    pub fn of(count: usize) -> Self {
        if count.is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn flip(self) -> Self {
        match self {
            Parity::Even => Parity::Odd,
            Parity::Odd => Parity::Even,
        }
    }
}

/// Parity addition: `Even` is the identity, `Odd + Odd = Even`.
impl Add for Parity {
    type Output = Parity;

    fn add(self, rhs: Parity) -> Parity {
        if self == rhs {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Parity::Even => "Even",
            Parity::Odd => "Odd",
        })
    }
}

/// Output style for [`Permutation::format`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Notation {
    Cycle,
    TwoLine,
}

/// A bijection on `{1..n}`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    images: Vec<u16>,
}

fn check_degree(n: usize) -> Result<(), PermError> {
    if n == 0 || n > MAX_DEGREE {
        Err(PermError::InvalidDegree(n))
    } else {
        Ok(())
    }
}

impl Permutation {
    pub fn identity(n: usize) -> Result<Self, PermError> {
        check_degree(n)?;
        Ok(Permutation {
            images: (0..n as u16).collect(),
        })
    }

    /// The 2-cycle `(i j)` of degree `n`.
    pub fn transposition(n: usize, i: usize, j: usize) -> Result<Self, PermError> {
        let mut p = Self::identity(n)?;
        for point in [i, j] {
            if point == 0 || point > n {
                return Err(PermError::PointOutOfRange { point, degree: n });
            }
        }
        if i == j {
            return Err(PermError::SamePoint(i));
        }
        p.images.swap(i - 1, j - 1);
        Ok(p)
    }

    /// Builds a permutation from its 1-based image list: entry `i` is the
    /// image of point `i + 1`.
    pub fn from_images(images: &[usize]) -> Result<Self, PermError> {
        let n = images.len();
        check_degree(n)?;
        let mut seen = vec![false; n];
        let mut out = Vec::with_capacity(n);
        for &image in images {
            if image == 0 || image > n {
                return Err(PermError::PointOutOfRange {
                    point: image,
                    degree: n,
                });
            }
            if std::mem::replace(&mut seen[image - 1], true) {
                return Err(PermError::NotBijection(image));
            }
            out.push((image - 1) as u16);
        }
        Ok(Permutation { images: out })
    }

    /// Wraps 0-based images that the caller already knows form a bijection.
    pub(crate) fn from_zero_based_unchecked(images: Vec<u16>) -> Self {
        debug_assert!({
            let mut seen = vec![false; images.len()];
            images
                .iter()
                .all(|&i| !std::mem::replace(&mut seen[i as usize], true))
        });
        Permutation { images }
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    /// 1-based image list.
    pub fn images(&self) -> Vec<usize> {
        self.images.iter().map(|&i| i as usize + 1).collect()
    }

    pub(crate) fn zero_based(&self) -> &[u16] {
        &self.images
    }

    /// Image of point `x`.
    pub fn apply(&self, x: usize) -> Result<usize, PermError> {
        if x == 0 || x > self.degree() {
            return Err(PermError::PointOutOfRange {
                point: x,
                degree: self.degree(),
            });
        }
        Ok(self.images[x - 1] as usize + 1)
    }

    /// `self ∘ inner`: `inner` acts first, then `self`.
    pub fn compose(&self, inner: &Permutation) -> Result<Permutation, PermError> {
        if self.degree() != inner.degree() {
            return Err(PermError::DegreeMismatch {
                left: self.degree(),
                right: inner.degree(),
            });
        }
        let images = inner
            .images
            .iter()
            .map(|&x| self.images[x as usize])
            .collect();
        Ok(Permutation { images })
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0u16; self.degree()];
        for (x, &y) in self.images.iter().enumerate() {
            images[y as usize] = x as u16;
        }
        Permutation { images }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i == x as usize)
    }

    /// Number of cycles, counting fixed points.
    pub fn cycle_count(&self) -> usize {
        let mut seen = vec![false; self.degree()];
        let mut count = 0;
        for start in 0..self.degree() {
            if seen[start] {
                continue;
            }
            count += 1;
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                x = self.images[x] as usize;
            }
        }
        count
    }

    /// Parity of `degree - cycle_count`.
    pub fn sign(&self) -> Parity {
        Parity::of(self.degree() - self.cycle_count())
    }

    pub fn cycles(&self) -> CycleDecomposition {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut cycles = Vec::new();
        // Ascending scan makes each cycle start at its smallest point and
        // keeps cycles sorted by that point.
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                cycle.push(x + 1);
                x = self.images[x] as usize;
            }
            cycles.push(cycle);
        }
        CycleDecomposition { degree: n, cycles }
    }

    /// Writes `self` as a product of transpositions `t_1 ∘ t_2 ∘ ... ∘ t_k`.
    ///
    /// A cycle `(a b c ... z)` contributes `(a z) ... (a c)(a b)`, so the word
    /// length is `degree - cycle_count`.
    pub fn transposition_word(&self) -> Vec<(usize, usize)> {
        let mut word = Vec::new();
        for cycle in self.cycles().cycles {
            if let Some((&head, rest)) = cycle.split_first() {
                for &b in rest.iter().rev() {
                    word.push((head, b));
                }
            }
        }
        word
    }

    /// Parses cycle notation or two-line notation at the given degree.
    ///
    /// Text containing `(` (or blank text) is read as cycle notation, where
    /// omitted points are fixed. Anything else must be two newline-separated
    /// rows of `degree` integers.
    pub fn parse(text: &str, degree: usize) -> Result<Permutation, ParseError> {
        check_degree(degree)?;
        let trimmed = text.trim();
        if trimmed.is_empty() || trimmed.contains('(') || trimmed.contains(')') {
            parse_cycles(text, degree)
        } else {
            parse_two_line(trimmed, degree)
        }
    }

    pub fn format(&self, style: Notation) -> String {
        match style {
            Notation::Cycle => self.cycles().to_string(),
            Notation::TwoLine => {
                let top: Vec<String> = (1..=self.degree()).map(|i| i.to_string()).collect();
                let bottom: Vec<String> = self.images().iter().map(|i| i.to_string()).collect();
                format!("{}\n{}", top.join(" "), bottom.join(" "))
            }
        }
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation[{}]{}", self.degree(), self.cycles())
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.cycles(), f)
    }
}

fn parse_point(token: &str, degree: usize) -> Result<usize, ParseError> {
    let point: usize = token
        .parse()
        .map_err(|_| ParseError::InvalidToken(token.to_string()))?;
    if point == 0 || point > degree {
        return Err(ParseError::PointOutOfRange { point, degree });
    }
    Ok(point)
}

fn parse_cycles(text: &str, degree: usize) -> Result<Permutation, ParseError> {
    let mut images: Vec<u16> = (0..degree as u16).collect();
    let mut seen = vec![false; degree];
    let mut chars = text.char_indices().peekable();

    while let Some((at, c)) = chars.next() {
        if c.is_whitespace() {
            continue;
        }
        if c != '(' {
            return Err(ParseError::MalformedParentheses(at));
        }
        let mut cycle = Vec::new();
        let mut token = String::new();
        let mut closed = false;
        for (pos, c) in chars.by_ref() {
            match c {
                ')' | ' ' | '\t' | '\n' | '\r' => {
                    if !token.is_empty() {
                        let point = parse_point(&token, degree)?;
                        if std::mem::replace(&mut seen[point - 1], true) {
                            return Err(ParseError::RepeatedPoint(point));
                        }
                        cycle.push(point);
                        token.clear();
                    }
                    if c == ')' {
                        closed = true;
                        break;
                    }
                }
                '(' => return Err(ParseError::MalformedParentheses(pos)),
                _ => token.push(c),
            }
        }
        if !closed {
            return Err(ParseError::MalformedParentheses(at));
        }
        if cycle.is_empty() {
            return Err(ParseError::EmptyCycle(at));
        }
        for (k, &p) in cycle.iter().enumerate() {
            let next = cycle[(k + 1) % cycle.len()];
            images[p - 1] = (next - 1) as u16;
        }
    }
    Ok(Permutation { images })
}

fn parse_row(line: &str, row: usize, degree: usize) -> Result<Vec<usize>, ParseError> {
    let values = line
        .split_whitespace()
        .map(|t| parse_point(t, degree))
        .collect::<Result<Vec<_>, _>>()?;
    if values.len() != degree {
        return Err(ParseError::RowLength {
            row,
            expected: degree,
            found: values.len(),
        });
    }
    let mut seen = vec![false; degree];
    if values
        .iter()
        .any(|&v| std::mem::replace(&mut seen[v - 1], true))
    {
        return Err(ParseError::RowNotBijection { row, degree });
    }
    Ok(values)
}

fn parse_two_line(text: &str, degree: usize) -> Result<Permutation, ParseError> {
    let rows: Vec<&str> = text.lines().filter(|l| !l.trim().is_empty()).collect();
    if rows.len() != 2 {
        return Err(ParseError::RowCount(rows.len()));
    }
    let top = parse_row(rows[0], 1, degree)?;
    let bottom = parse_row(rows[1], 2, degree)?;
    let mut images = vec![0u16; degree];
    for (&x, &y) in top.iter().zip(&bottom) {
        images[x - 1] = (y - 1) as u16;
    }
    Ok(Permutation { images })
}

/// Disjoint cycles in canonical order, fixed points included.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleDecomposition {
    degree: usize,
    cycles: Vec<Vec<usize>>,
}

impl CycleDecomposition {
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn cycles(&self) -> &[Vec<usize>] {
        &self.cycles
    }

    /// Cycles of length at least two.
    pub fn nontrivial(&self) -> impl Iterator<Item = &[usize]> {
        self.cycles.iter().filter(|c| c.len() > 1).map(Vec::as_slice)
    }

    pub fn to_permutation(&self) -> Permutation {
        let mut images: Vec<u16> = (0..self.degree as u16).collect();
        for cycle in &self.cycles {
            for (k, &p) in cycle.iter().enumerate() {
                images[p - 1] = (cycle[(k + 1) % cycle.len()] - 1) as u16;
            }
        }
        Permutation::from_zero_based_unchecked(images)
    }
}

impl fmt::Display for CycleDecomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for cycle in &self.cycles {
            f.write_str("(")?;
            for (k, p) in cycle.iter().enumerate() {
                if k > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "{p}")?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const A_IMAGES: [usize; 16] = [3, 2, 13, 9, 6, 7, 12, 5, 10, 11, 8, 4, 15, 14, 1, 16];
    const A_CYCLES: &str = "(1 3 13 15)(2)(4 9 10 11 8 5 6 7 12)(14)(16)";

    fn a() -> Permutation {
        Permutation::from_images(&A_IMAGES).unwrap()
    }

    fn perm(images: &[usize]) -> Permutation {
        Permutation::from_images(images).unwrap()
    }

    #[test]
    fn identity_basics() {
        assert_eq!(Permutation::identity(1).unwrap().images(), vec![1]);
        assert_eq!(Permutation::identity(4).unwrap().images(), vec![1, 2, 3, 4]);
        assert_eq!(Permutation::identity(16).unwrap().sign(), Parity::Even);
        assert_eq!(Permutation::identity(0), Err(PermError::InvalidDegree(0)));
    }

    #[test]
    fn transposition_basics() {
        let t = Permutation::transposition(16, 14, 15).unwrap();
        assert_eq!(t.to_string(), "(1)(2)(3)(4)(5)(6)(7)(8)(9)(10)(11)(12)(13)(14 15)(16)");
        assert_eq!(t.sign(), Parity::Odd);
        assert_eq!(t.apply(3).unwrap(), 3);
        assert_eq!(t.apply(14).unwrap(), 15);
        assert_eq!(Permutation::transposition(16, 4, 4), Err(PermError::SamePoint(4)));
        assert_eq!(
            Permutation::transposition(16, 0, 4),
            Err(PermError::PointOutOfRange { point: 0, degree: 16 })
        );
        assert_eq!(
            Permutation::transposition(16, 4, 17),
            Err(PermError::PointOutOfRange { point: 17, degree: 16 })
        );
    }

    #[test]
    fn from_images_rejects_non_bijections() {
        assert_eq!(
            Permutation::from_images(&[1, 1, 3]),
            Err(PermError::NotBijection(1))
        );
        assert_eq!(
            Permutation::from_images(&[1, 4, 3]),
            Err(PermError::PointOutOfRange { point: 4, degree: 3 })
        );
        assert_eq!(Permutation::from_images(&[]), Err(PermError::InvalidDegree(0)));
    }

    #[test]
    fn compose_examples() {
        let id = Permutation::identity(16).unwrap();
        assert_eq!(id.compose(&a()).unwrap(), a());
        let t = Permutation::transposition(16, 14, 15).unwrap();
        assert_eq!(t.compose(&id).unwrap(), t);
        // Pointwise: 1 -> 1 -> 2, 2 -> 3 -> 3, 3 -> 2 -> 1.
        let outer = Permutation::transposition(3, 1, 2).unwrap();
        let inner = Permutation::transposition(3, 2, 3).unwrap();
        let c = outer.compose(&inner).unwrap();
        assert_eq!(c.images(), vec![2, 3, 1]);
        assert_eq!(c.to_string(), "(1 2 3)");
        assert_eq!(
            id.compose(&Permutation::identity(3).unwrap()),
            Err(PermError::DegreeMismatch { left: 16, right: 3 })
        );
    }

    #[test]
    fn inverse_examples() {
        let id = Permutation::identity(16).unwrap();
        assert_eq!(id.inverse(), id);
        let c = Permutation::parse("(1 3 13 15)", 16).unwrap();
        let inv = c.inverse();
        assert_eq!(inv, Permutation::parse("(1 15 13 3)", 16).unwrap());
        assert!(inv.compose(&c).unwrap().is_identity());
        let t = Permutation::transposition(16, 14, 15).unwrap();
        assert_eq!(t.inverse(), t);
    }

    #[test]
    fn apply_examples() {
        assert_eq!(a().apply(1).unwrap(), 3);
        assert_eq!(a().apply(16).unwrap(), 16);
        assert_eq!(Permutation::identity(16).unwrap().apply(7).unwrap(), 7);
        assert!(a().apply(0).is_err());
        assert!(a().apply(17).is_err());
    }

    #[test]
    fn sign_of_a_is_odd() {
        // 4-cycle (3 transpositions) and 9-cycle (8 transpositions).
        assert_eq!(a().sign(), Parity::Odd);
        assert_eq!(a().transposition_word().len(), 11);
    }

    #[test]
    fn cycles_examples() {
        assert_eq!(a().cycles().to_string(), A_CYCLES);
        assert_eq!(Permutation::identity(3).unwrap().cycles().to_string(), "(1)(2)(3)");
        assert_eq!(
            Permutation::transposition(4, 2, 4).unwrap().cycles().to_string(),
            "(1)(2 4)(3)"
        );
        assert_eq!(a().cycles().to_permutation(), a());
        assert_eq!(a().cycles().nontrivial().count(), 2);
    }

    #[test]
    fn transposition_word_rebuilds_permutation() {
        let p = a();
        let mut acc = Permutation::identity(16).unwrap();
        for (i, j) in p.transposition_word() {
            acc = acc.compose(&Permutation::transposition(16, i, j).unwrap()).unwrap();
        }
        assert_eq!(acc, p);
    }

    #[test]
    fn parse_examples() {
        assert_eq!(
            Permutation::parse("(1 3 13 15)(4 9 10 11 8 5 6 7 12)", 16).unwrap(),
            a()
        );
        assert_eq!(Permutation::parse(A_CYCLES, 16).unwrap(), a());
        assert!(Permutation::parse("", 16).unwrap().is_identity());
        assert_eq!(
            Permutation::parse("(1 2)(2 3)", 3),
            Err(ParseError::RepeatedPoint(2))
        );
        assert_eq!(Permutation::parse("(1 2 1)", 3), Err(ParseError::RepeatedPoint(1)));
        assert_eq!(
            Permutation::parse("(1 4)", 3),
            Err(ParseError::PointOutOfRange { point: 4, degree: 3 })
        );
        assert!(matches!(
            Permutation::parse("(1 2", 3),
            Err(ParseError::MalformedParentheses(_))
        ));
        assert!(matches!(
            Permutation::parse("1 2)", 3),
            Err(ParseError::MalformedParentheses(0))
        ));
        assert!(matches!(
            Permutation::parse("((1 2))", 3),
            Err(ParseError::MalformedParentheses(_))
        ));
        assert!(matches!(Permutation::parse("()", 3), Err(ParseError::EmptyCycle(_))));
        assert!(matches!(
            Permutation::parse("(1 x)", 3),
            Err(ParseError::InvalidToken(_))
        ));
        assert_eq!(
            Permutation::parse("(1 2)", 0),
            Err(ParseError::Degree(PermError::InvalidDegree(0)))
        );
    }

    #[test]
    fn degree_is_explicit() {
        let small = Permutation::parse("(1 2)", 2).unwrap();
        let large = Permutation::parse("(1 2)", 16).unwrap();
        assert_eq!(small.degree(), 2);
        assert_eq!(large.degree(), 16);
        assert_ne!(small, large);
    }

    #[test]
    fn two_line_parse_and_format() {
        let t = Permutation::transposition(3, 1, 2).unwrap();
        assert_eq!(t.format(Notation::TwoLine), "1 2 3\n2 1 3");
        assert_eq!(Permutation::parse("1 2 3\n2 1 3", 3).unwrap(), t);
        // Top row need not be sorted.
        assert_eq!(Permutation::parse("2 1 3\n1 2 3", 3).unwrap(), t);
        assert_eq!(
            Permutation::parse("1 2 3\n2 2 3", 3),
            Err(ParseError::RowNotBijection { row: 2, degree: 3 })
        );
        assert_eq!(
            Permutation::parse("1 1 3\n2 1 3", 3),
            Err(ParseError::RowNotBijection { row: 1, degree: 3 })
        );
        assert_eq!(
            Permutation::parse("1 2\n2 1", 3),
            Err(ParseError::RowLength { row: 1, expected: 3, found: 2 })
        );
        assert_eq!(Permutation::parse("1 2 3", 3), Err(ParseError::RowCount(1)));
    }

    #[test]
    fn cycle_format_examples() {
        assert_eq!(a().format(Notation::Cycle), A_CYCLES);
        assert_eq!(Permutation::identity(2).unwrap().format(Notation::Cycle), "(1)(2)");
        assert_eq!(perm(&[2, 3, 1]).format(Notation::Cycle), "(1 2 3)");
    }

    #[test]
    fn parity_addition() {
        assert_eq!(Parity::Even + Parity::Even, Parity::Even);
        assert_eq!(Parity::Even + Parity::Odd, Parity::Odd);
        assert_eq!(Parity::Odd + Parity::Odd, Parity::Even);
        assert_eq!(Parity::Odd.flip(), Parity::Even);
        assert_eq!(Parity::of(31), Parity::Odd);
    }
}
