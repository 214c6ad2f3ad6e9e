use std::cmp::Ordering;

/// Canonical basis index of a carrier.
///
/// Letters of free-group words are `+g` / `-g` for generator `g - 1` and its
/// inverse; words are always freely reduced.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum BasisWord {
    /// Exponent vector of `Z^d`.
    Exponents(Vec<i64>),
    /// Freely reduced word in a free group.
    Reduced(Vec<i32>),
    /// Word in a free associative algebra; letters are generator indices.
    Monomial(Vec<u32>),
    /// Matrix unit `E[x, y]` of a translation algebra.
    Unit(usize, usize),
}

impl BasisWord {
    fn variant_rank(&self) -> u8 {
        match self {
            BasisWord::Exponents(_) => 0,
            BasisWord::Reduced(_) => 1,
            BasisWord::Monomial(_) => 2,
            BasisWord::Unit(..) => 3,
        }
    }

    /// Word length in the generators (0 for matrix units).
    pub fn length(&self) -> usize {
        match self {
            BasisWord::Exponents(e) => e.iter().map(|x| x.unsigned_abs() as usize).sum(),
            BasisWord::Reduced(w) => w.len(),
            BasisWord::Monomial(w) => w.len(),
            BasisWord::Unit(..) => 0,
        }
    }
}

/// Sort key of a group letter: generator index, then positive before inverse.
fn letter_key(x: i32) -> (u32, bool) {
    (x.unsigned_abs(), x < 0)
}

fn exponent_letters(e: &[i64]) -> impl Iterator<Item = (u32, bool)> + '_ {
    e.iter().enumerate().flat_map(|(i, &x)| {
        std::iter::repeat_n((i as u32 + 1, x < 0), x.unsigned_abs() as usize)
    })
}

impl Ord for BasisWord {
    /// Shortlex within each kind; matrix units lexicographically.
    fn cmp(&self, other: &Self) -> Ordering {
        use BasisWord::*;
        match (self, other) {
            (Exponents(a), Exponents(b)) => self
                .length()
                .cmp(&other.length())
                .then_with(|| exponent_letters(a).cmp(exponent_letters(b)))
                .then_with(|| a.len().cmp(&b.len())),
            (Reduced(a), Reduced(b)) => a
                .len()
                .cmp(&b.len())
                .then_with(|| a.iter().map(|&x| letter_key(x)).cmp(b.iter().map(|&x| letter_key(x)))),
            (Monomial(a), Monomial(b)) => a.len().cmp(&b.len()).then_with(|| a.cmp(b)),
            (Unit(a, b), Unit(c, d)) => (a, b).cmp(&(c, d)),
            _ => self.variant_rank().cmp(&other.variant_rank()),
        }
    }
}

impl PartialOrd for BasisWord {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Free reduction of the concatenation `a b`.
pub fn reduce_concat(a: &[i32], b: &[i32]) -> Vec<i32> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    for &x in a.iter().chain(b) {
        if out.last() == Some(&-x) {
            out.pop();
        } else {
            out.push(x);
        }
    }
    out
}

pub fn is_reduced(w: &[i32]) -> bool {
    w.windows(2).all(|p| p[0] != -p[1])
}

pub fn inverse_word(w: &[i32]) -> Vec<i32> {
    w.iter().rev().map(|x| -x).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn free_reduction() {
        // (a b)(b^-1 a) = a^2
        assert_eq!(reduce_concat(&[1, 2], &[-2, 1]), vec![1, 1]);
        assert_eq!(reduce_concat(&[1, 2], &inverse_word(&[1, 2])), Vec::<i32>::new());
        assert!(is_reduced(&[1, 2, -1]));
        assert!(!is_reduced(&[1, -1]));
    }

    #[test]
    fn shortlex_order() {
        let one = BasisWord::Exponents(vec![0]);
        let t = BasisWord::Exponents(vec![1]);
        let ti = BasisWord::Exponents(vec![-1]);
        let t2 = BasisWord::Exponents(vec![2]);
        assert!(one < t && t < ti && ti < t2);
        let x = BasisWord::Exponents(vec![1, 0]);
        let y = BasisWord::Exponents(vec![0, 1]);
        let xy = BasisWord::Exponents(vec![1, 1]);
        let xi = BasisWord::Exponents(vec![-1, 0]);
        assert!(x < xi && xi < y && y < xy);
        let a = BasisWord::Reduced(vec![1]);
        let ai = BasisWord::Reduced(vec![-1]);
        let b = BasisWord::Reduced(vec![2]);
        assert!(a < ai && ai < b);
        assert!(BasisWord::Unit(1, 5) < BasisWord::Unit(2, 0));
        assert!(BasisWord::Monomial(vec![1]) < BasisWord::Monomial(vec![0, 0]));
    }
}
