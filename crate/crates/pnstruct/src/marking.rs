//! Markings as dense token vectors indexed by place.

use std::cmp::Ordering;
use std::fmt::Write as _;

/// A multiset of places. Index `i` holds the token count of place `i` of the
/// owning net, so structural equality coincides with multiset equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Marking(Vec<u32>);

impl Marking {
    pub fn empty(place_count: usize) -> Self {
        Marking(vec![0; place_count])
    }

    pub fn from_counts(counts: Vec<u32>) -> Self {
        Marking(counts)
    }

    /// One token on each listed place.
    pub fn from_places(place_count: usize, places: &[usize]) -> Self {
        let mut m = Marking::empty(place_count);
        for &p in places {
            m.0[p] += 1;
        }
        m
    }

    pub fn counts(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn get(&self, p: usize) -> u32 {
        self.0[p]
    }

    pub fn set(&mut self, p: usize, count: u32) {
        self.0[p] = count;
    }

    pub fn total(&self) -> u64 {
        self.0.iter().map(|&c| c as u64).sum()
    }

    /// Places carrying at least one token, in index order.
    pub fn support(&self) -> Vec<usize> {
        self.sparse().map(|(p, _)| p).collect()
    }

    /// Non-zero entries in index order.
    pub fn sparse(&self) -> impl Iterator<Item = (usize, u32)> + '_ {
        self.0.iter().enumerate().filter(|(_, &c)| c > 0).map(|(p, &c)| (p, c))
    }

    /// `self >= other` componentwise.
    pub fn covers(&self, other: &Marking) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a >= b)
    }

    /// `self >= other` componentwise and `self != other`.
    pub fn strictly_dominates(&self, other: &Marking) -> bool {
        self.covers(other) && self.0 != other.0
    }

    pub fn add(&self, other: &Marking) -> Marking {
        Marking(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Componentwise difference; `None` unless `self` covers `other`.
    pub fn checked_sub(&self, other: &Marking) -> Option<Marking> {
        self.0.iter().zip(&other.0).map(|(a, b)| a.checked_sub(*b)).collect::<Option<Vec<_>>>().map(Marking)
    }

    /// Counts outside `keep` are dropped (set to zero).
    pub fn restrict(&self, keep: &[bool]) -> Marking {
        Marking(self.0.iter().zip(keep).map(|(&c, &k)| if k { c } else { 0 }).collect())
    }

    /// Bracket notation with `p^k` for repeated places, e.g. `[p1,p2^2]`.
    pub fn display<S: AsRef<str>>(&self, names: &[S]) -> String {
        let mut out = String::from("[");
        for (i, (p, c)) in self.sparse().enumerate() {
            if i > 0 {
                out.push(',');
            }
            out.push_str(names[p].as_ref());
            if c > 1 {
                let _ = write!(out, "^{c}");
            }
        }
        out.push(']');
        out
    }
}

/// Lexicographic order over the sparse `(place, count)` lists. Place indices
/// follow sorted place ids, so this is the order on `(id, count)` pairs.
impl Ord for Marking {
    fn cmp(&self, other: &Self) -> Ordering {
        let mut a = self.sparse();
        let mut b = other.sparse();
        loop {
            match (a.next(), b.next()) {
                (None, None) => return Ordering::Equal,
                (None, Some(_)) => return Ordering::Less,
                (Some(_), None) => return Ordering::Greater,
                (Some(x), Some(y)) => match x.0.cmp(&y.0).then(x.1.cmp(&y.1)) {
                    Ordering::Equal => continue,
                    o => return o,
                },
            }
        }
    }
}

impl PartialOrd for Marking {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
