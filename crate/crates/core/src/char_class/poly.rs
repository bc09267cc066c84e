use std::collections::BTreeSet;
use std::fmt;

/// A polynomial over GF(2) in `x_1..x_d`, stored as its set of monomials
/// (exponent vectors). Adding a monomial that is already present cancels it.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PolyZ2 {
    vars: usize,
    terms: BTreeSet<Vec<u32>>,
}

impl PolyZ2 {
    pub fn zero(vars: usize) -> Self {
        PolyZ2 {
            vars,
            terms: BTreeSet::new(),
        }
    }

    pub fn one(vars: usize) -> Self {
        let mut p = Self::zero(vars);
        p.toggle(vec![0; vars]);
        p
    }

    /// The variable `x_i`, `1 ≤ i ≤ vars`.
    pub fn var(vars: usize, i: usize) -> Self {
        assert!((1..=vars).contains(&i), "variable x_{i} out of range");
        let mut e = vec![0; vars];
        e[i - 1] = 1;
        let mut p = Self::zero(vars);
        p.toggle(e);
        p
    }

    pub fn from_monomials<I: IntoIterator<Item = Vec<u32>>>(vars: usize, monomials: I) -> Self {
        let mut p = Self::zero(vars);
        for m in monomials {
            assert_eq!(m.len(), vars, "exponent vector has the wrong length");
            p.toggle(m);
        }
        p
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn monomials(&self) -> impl Iterator<Item = &[u32]> {
        self.terms.iter().map(Vec::as_slice)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    fn toggle(&mut self, m: Vec<u32>) {
        if !self.terms.remove(&m) {
            self.terms.insert(m);
        }
    }

    pub fn add_assign(&mut self, other: &PolyZ2) {
        assert_eq!(self.vars, other.vars);
        for m in &other.terms {
            self.toggle(m.clone());
        }
    }

    pub fn add(&self, other: &PolyZ2) -> PolyZ2 {
        let mut p = self.clone();
        p.add_assign(other);
        p
    }

    pub fn mul(&self, other: &PolyZ2) -> PolyZ2 {
        assert_eq!(self.vars, other.vars);
        let mut p = PolyZ2::zero(self.vars);
        for a in &self.terms {
            for b in &other.terms {
                p.toggle(a.iter().zip(b).map(|(x, y)| x + y).collect());
            }
        }
        p
    }

    /// Weighted degree of a monomial, `x_i` having weight `i`.
    pub fn monomial_weight(m: &[u32]) -> usize {
        m.iter().enumerate().map(|(i, &e)| (i + 1) * e as usize).sum()
    }

    /// The common weighted degree of all monomials, if there is one. The
    /// zero polynomial has no degree.
    pub fn homogeneous_degree(&self) -> Option<usize> {
        let mut weights = self.terms.iter().map(|m| Self::monomial_weight(m));
        let first = weights.next()?;
        weights.all(|w| w == first).then_some(first)
    }
}

impl fmt::Display for PolyZ2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        // Highest total weight first reads more naturally.
        let mut terms: Vec<&Vec<u32>> = self.terms.iter().collect();
        terms.sort_by(|a, b| {
            Self::monomial_weight(b)
                .cmp(&Self::monomial_weight(a))
                .then_with(|| b.cmp(a))
        });
        for m in terms {
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            let factors: Vec<String> = m
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| {
                    if e == 1 {
                        format!("x{}", i + 1)
                    } else {
                        format!("x{}^{e}", i + 1)
                    }
                })
                .collect();
            if factors.is_empty() {
                f.write_str("1")?;
            } else {
                f.write_str(&factors.join("*"))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for PolyZ2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PolyZ2({self})")
    }
}
