//! Channel names, name sets and the deterministic fresh-name supply.

use std::borrow::Borrow;
use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

/// Spelling of the reserved name used to signal restricted communications.
pub const NU_TEXT: &str = "nu";

/// A channel or parameter name.
///
/// Names produced by the parser never contain `#`. Binders renamed by
/// [`crate::process::alpha_canonicalize`] get the form `base#n`, and names
/// invented for input instantiation or extrusion get the form `#n`, so the
/// three populations never collide.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Name(Arc<str>);

impl Name {
    pub fn new(text: impl AsRef<str>) -> Self {
        Name(Arc::from(text.as_ref()))
    }

    /// The reserved name `nu`. It may label actions but never occurs in terms.
    pub fn nu() -> Self {
        Name::new(NU_TEXT)
    }

    pub fn is_nu(&self) -> bool {
        &*self.0 == NU_TEXT
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// The part of the name before any `#` suffix.
    pub fn base(&self) -> &str {
        match self.0.find('#') {
            Some(i) => &self.0[..i],
            None => &self.0,
        }
    }

    /// True for names minted by the engine (`#n`), as opposed to source names
    /// and renamed binders.
    pub fn is_generated(&self) -> bool {
        self.0.starts_with('#')
    }

    /// The `n`-th engine-generated name, `#n`.
    pub fn generated(n: usize) -> Self {
        Name::new(format!("#{n}"))
    }
}

impl fmt::Debug for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Name {
    fn from(s: &str) -> Self {
        Name::new(s)
    }
}

impl From<String> for Name {
    fn from(s: String) -> Self {
        Name(Arc::from(s))
    }
}

impl Borrow<str> for Name {
    fn borrow(&self) -> &str {
        &self.0
    }
}

/// A finite set of names, kept sorted so printing and hashing are stable.
pub type NameSet = BTreeSet<Name>;

/// Builds a [`NameSet`] from string-like items.
pub fn name_set<I, S>(items: I) -> NameSet
where
    I: IntoIterator<Item = S>,
    S: AsRef<str>,
{
    items.into_iter().map(Name::new).collect()
}

/// Deterministic supply of `base#n` names avoiding a fixed set of names.
///
/// The counter is shared across bases, so a single pass over a term numbers
/// its binders `x#1, y#2, x#3, ...` in traversal order.
#[derive(Debug, Clone)]
pub struct FreshSupply {
    avoid: HashSet<Name>,
    counter: usize,
}

impl FreshSupply {
    pub fn new<I: IntoIterator<Item = Name>>(avoid: I) -> Self {
        FreshSupply {
            avoid: avoid.into_iter().collect(),
            counter: 0,
        }
    }

    pub fn avoid(&mut self, name: Name) {
        self.avoid.insert(name);
    }

    pub fn fresh(&mut self, like: &Name) -> Name {
        let base = match like.base() {
            "" => "v",
            b => b,
        };
        loop {
            self.counter += 1;
            let candidate = Name::new(format!("{base}#{}", self.counter));
            if !self.avoid.contains(&candidate) {
                self.avoid.insert(candidate.clone());
                return candidate;
            }
        }
    }
}

/// Picks a source-level identifier (no `#`) based on `stem` that is not in `taken`.
pub fn plain_fresh(stem: &str, taken: &NameSet) -> Name {
    let first = Name::new(stem);
    if !taken.contains(&first) {
        return first;
    }
    (1..)
        .map(|i| Name::new(format!("{stem}{i}")))
        .find(|n| !taken.contains(n))
        .expect("unbounded search")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn base_strips_suffix() {
        assert_eq!(Name::new("x#12").base(), "x");
        assert_eq!(Name::new("x").base(), "x");
        assert_eq!(Name::generated(3).base(), "");
        assert!(Name::generated(3).is_generated());
        assert!(!Name::new("x#1").is_generated());
    }

    #[test]
    fn fresh_supply_skips_avoided() {
        let mut s = FreshSupply::new([Name::new("x#1"), Name::new("y#2")]);
        assert_eq!(s.fresh(&Name::new("x")).as_str(), "x#2");
        assert_eq!(s.fresh(&Name::new("y")).as_str(), "y#3");
        assert_eq!(s.fresh(&Name::new("x#3")).as_str(), "x#4");
        assert_eq!(s.fresh(&Name::generated(1)).as_str(), "v#5");
    }

    #[test]
    fn plain_fresh_avoids_taken() {
        let taken = name_set(["k", "k1"]);
        assert_eq!(plain_fresh("k", &taken).as_str(), "k2");
        assert_eq!(plain_fresh("w", &taken).as_str(), "w");
    }
}
