//! Bracelet patterns of fold-angle equalities and the classification of the
//! six-crease patterns on the regular vertex.

use std::collections::BTreeSet;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{FoldError, Result};
use crate::geometry::CreasePattern;
use crate::rigidity::{symmetric_mode_solve, ModeSolution};

/// Assignment of creases to equality classes, labeled in first-occurrence
/// order (`1` for the first crease, each new class the next integer).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct ColorPattern {
    classes: Vec<u8>,
}

impl ColorPattern {
    /// Accepts only first-occurrence labelings.
    pub fn new(classes: Vec<u8>) -> Result<Self> {
        if classes.is_empty() {
            return Err(FoldError::InvalidInput("empty color pattern".into()));
        }
        let relabeled = first_occurrence(&classes);
        if relabeled != classes {
            return Err(FoldError::InvalidInput(format!(
                "classes {classes:?} are not in first-occurrence order"
            )));
        }
        Ok(ColorPattern { classes })
    }

    /// Relabels arbitrary labels into first-occurrence order without any
    /// dihedral normalization.
    pub fn from_labels<T: PartialEq>(labels: &[T]) -> Self {
        ColorPattern {
            classes: first_occurrence(labels),
        }
    }

    pub fn classes(&self) -> &[u8] {
        &self.classes
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    /// Number of distinct classes.
    pub fn k(&self) -> usize {
        self.classes.iter().copied().max().unwrap_or(0) as usize
    }
}

fn first_occurrence<T: PartialEq>(labels: &[T]) -> Vec<u8> {
    let mut seen: Vec<&T> = Vec::new();
    labels
        .iter()
        .map(|x| match seen.iter().position(|s| *s == x) {
            Some(i) => (i + 1) as u8,
            None => {
                seen.push(x);
                seen.len() as u8
            }
        })
        .collect()
}

impl fmt::Display for ColorPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sep = if self.k() > 9 { "," } else { "" };
        let parts: Vec<String> = self.classes.iter().map(u8::to_string).collect();
        f.write_str(&parts.join(sep))
    }
}

impl std::str::FromStr for ColorPattern {
    type Err = FoldError;

    /// Parses digit strings such as `"121212"`; other labels are relabeled in
    /// first-occurrence order, so `"212121"` parses to `121212`.
    fn from_str(s: &str) -> Result<Self> {
        let labels: Vec<char> = s
            .chars()
            .filter(|c| !c.is_whitespace() && *c != ',')
            .collect();
        if labels.is_empty() {
            return Err(FoldError::InvalidInput("empty color pattern".into()));
        }
        Ok(ColorPattern::from_labels(&labels))
    }
}

impl TryFrom<String> for ColorPattern {
    type Error = FoldError;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<ColorPattern> for String {
    fn from(p: ColorPattern) -> Self {
        p.to_string()
    }
}

/// Lexicographically smallest first-occurrence relabeling over all rotations
/// and reflections of the bracelet.
pub fn canonical_form<T: PartialEq>(coloring: &[T]) -> ColorPattern {
    let n = coloring.len();
    let mut best: Option<Vec<u8>> = None;
    for shift in 0..n.max(1) {
        for reflect in [false, true] {
            let image: Vec<&T> = (0..n)
                .map(|i| {
                    let j = if reflect {
                        (shift + n - i) % n
                    } else {
                        (shift + i) % n
                    };
                    &coloring[j]
                })
                .collect();
            let candidate = first_occurrence(&image);
            if best.as_ref().is_none_or(|b| candidate < *b) {
                best = Some(candidate);
            }
        }
    }
    ColorPattern {
        classes: best.unwrap_or_default(),
    }
}

/// All canonical six-bead bracelet patterns using exactly `k` classes.
///
/// Brute force over every labeling of six beads with six colors.
pub fn enumerate_patterns(k: usize) -> Result<Vec<ColorPattern>> {
    if !(1..=6).contains(&k) {
        return Err(FoldError::InvalidInput(format!("k = {k} is not in 1..=6")));
    }
    let mut found = BTreeSet::new();
    let mut labels = [0u8; 6];
    for code in 0..6usize.pow(6) {
        let mut c = code;
        for slot in labels.iter_mut() {
            *slot = (c % 6) as u8;
            c /= 6;
        }
        let p = canonical_form(&labels);
        if p.k() == k {
            found.insert(p);
        }
    }
    Ok(found.into_iter().collect())
}

/// A foldable pattern as reported in the classification table.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FoldablePattern {
    /// Conventional representative of the class (may differ from the
    /// canonical form, e.g. `122122` for the bow tie).
    pub pattern: String,
    pub canonical: ColorPattern,
    pub name: String,
    pub dof: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BraceletRow {
    pub k: usize,
    pub pattern_count: usize,
    #[serde(rename = "foldable")]
    pub foldable_patterns: Vec<FoldablePattern>,
}

const NAMES: [(&str, &str, &str); 7] = [
    ("121212", "121212", "trifold"),
    ("112112", "122122", "bow tie"),
    ("123123", "123123", "opposites"),
    ("121343", "123432", "igloo"),
    ("112234", "112234", "two pair"),
    ("112345", "112345", "almost general"),
    ("123456", "123456", "fully general"),
];

/// Conventional display form and name for a canonical pattern.
pub fn pattern_name(canonical: &ColorPattern) -> (String, String) {
    let key = canonical.to_string();
    NAMES
        .iter()
        .find(|(c, _, _)| *c == key)
        .map(|(_, shown, name)| (shown.to_string(), name.to_string()))
        .unwrap_or((key, "unnamed".to_string()))
}

/// Mode analysis of every canonical pattern on the regular vertex, in
/// `(k, pattern)` order.
pub fn solve_all_g60() -> Vec<ModeSolution> {
    let g60 = CreasePattern::g60();
    let patterns: Vec<ColorPattern> = (1..=6)
        .flat_map(|k| enumerate_patterns(k).expect("k in range"))
        .collect();
    patterns
        .par_iter()
        .map(|p| symmetric_mode_solve(&g60, p))
        .collect()
}

/// The classification table for the regular degree-6 vertex: pattern counts
/// per `k` and the patterns that fold rigidly without collapsing onto a
/// pattern with fewer classes.
pub fn classify_g60() -> Vec<BraceletRow> {
    let solutions = solve_all_g60();
    (1..=6)
        .map(|k| {
            let in_row: Vec<&ModeSolution> = solutions
                .iter()
                .filter(|s| s.color_pattern.k() == k)
                .collect();
            let foldable_patterns = in_row
                .iter()
                .filter(|s| s.is_genuine())
                .map(|s| {
                    let (pattern, name) = pattern_name(&s.color_pattern);
                    FoldablePattern {
                        pattern,
                        canonical: s.color_pattern.clone(),
                        name,
                        dof: s.dof,
                    }
                })
                .collect();
            BraceletRow {
                k,
                pattern_count: in_row.len(),
                foldable_patterns,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pat(s: &str) -> ColorPattern {
        s.parse().unwrap()
    }

    /// Orbit count of exact-k colorings under the dihedral group combined with
    /// color relabeling, by direct orbit enumeration over set partitions.
    fn partition_orbits(k: usize) -> usize {
        // Restricted growth strings of length 6 are the set partitions.
        fn rec(prefix: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
            if prefix.len() == 6 {
                out.push(prefix.clone());
                return;
            }
            let m = prefix.iter().copied().max().unwrap_or(0);
            for c in 1..=m + 1 {
                prefix.push(c);
                rec(prefix, out);
                prefix.pop();
            }
        }
        let mut all = Vec::new();
        rec(&mut Vec::new(), &mut all);
        let parts: Vec<Vec<u8>> = all
            .into_iter()
            .filter(|p| *p.iter().max().unwrap() as usize == k)
            .collect();
        // Burnside over the 12 dihedral symmetries acting on partitions.
        let mut fixed = 0;
        for shift in 0..6 {
            for reflect in [false, true] {
                for p in &parts {
                    let img: Vec<u8> = (0..6)
                        .map(|i| {
                            p[if reflect {
                                (shift + 6 - i) % 6
                            } else {
                                (shift + i) % 6
                            }]
                        })
                        .collect();
                    if first_occurrence(&img) == *p {
                        fixed += 1;
                    }
                }
            }
        }
        assert_eq!(fixed % 12, 0);
        fixed / 12
    }

    #[test]
    fn canonical_examples() {
        assert_eq!(
            canonical_form(&[2, 2, 2, 1, 1, 3]),
            canonical_form(&[1, 1, 1, 2, 2, 3])
        );
        assert_eq!(canonical_form(&[2, 2, 2, 1, 1, 3]).to_string(), "111223");
        assert_eq!(canonical_form(&[1, 2, 1, 2, 1, 2]), pat("121212"));
        assert_eq!(canonical_form(&[2, 1, 2, 1, 2, 1]), pat("121212"));
        assert_eq!(
            canonical_form(pat("122122").classes()).to_string(),
            "112112"
        );
        assert_eq!(
            canonical_form(pat("123432").classes()).to_string(),
            "121343"
        );
        assert_eq!(
            canonical_form(pat("112234").classes()).to_string(),
            "112234"
        );
    }

    #[test]
    fn enumeration_matches_burnside_count() {
        let counts: Vec<usize> = (1..=6)
            .map(|k| enumerate_patterns(k).unwrap().len())
            .collect();
        let oracle: Vec<usize> = (1..=6).map(partition_orbits).collect();
        assert_eq!(counts, oracle);
        assert_eq!(counts, vec![1, 7, 14, 11, 3, 1]);
    }

    #[test]
    fn enumeration_examples() {
        assert_eq!(enumerate_patterns(1).unwrap(), vec![pat("111111")]);
        assert_eq!(enumerate_patterns(6).unwrap(), vec![pat("123456")]);
        let k3 = enumerate_patterns(3).unwrap();
        assert!(k3.contains(&pat("123123")));
        assert!(k3.contains(&canonical_form(pat("123232").classes())));
        assert!(enumerate_patterns(0).is_err());
        assert!(enumerate_patterns(7).is_err());
    }

    #[test]
    fn color_pattern_validation() {
        assert!(ColorPattern::new(vec![1, 2, 1]).is_ok());
        assert!(ColorPattern::new(vec![2, 1, 2]).is_err());
        assert_eq!(pat("212121"), pat("121212"));
        let json = serde_json::to_string(&pat("123432")).unwrap();
        assert_eq!(json, "\"123432\"");
    }

    #[test]
    fn classification_rows() {
        let rows = classify_g60();
        assert_eq!(rows.len(), 6);
        assert!(rows[0].foldable_patterns.is_empty());
        let k2: Vec<(&str, usize)> = rows[1]
            .foldable_patterns
            .iter()
            .map(|f| (f.pattern.as_str(), f.dof))
            .collect();
        assert_eq!(k2.len(), 2);
        assert!(k2.contains(&("121212", 1)));
        assert!(k2.contains(&("122122", 1)));
        let k5 = &rows[4].foldable_patterns;
        assert_eq!(k5.len(), 1);
        assert_eq!((k5[0].pattern.as_str(), k5[0].dof), ("112345", 2));
        for row in &rows {
            assert!(row.pattern_count >= row.foldable_patterns.len());
        }
    }

    proptest! {
        #[test]
        fn canonical_is_idempotent_and_dihedral_invariant(
            labels in proptest::collection::vec(0u8..6, 6),
            shift in 0usize..6,
            reflect: bool,
            perm in Just([0u8, 1, 2, 3, 4, 5]).prop_shuffle(),
        ) {
            let c = canonical_form(&labels);
            prop_assert_eq!(canonical_form(c.classes()), c.clone());
            let moved: Vec<u8> = (0..6)
                .map(|i| {
                    let j = if reflect { (shift + 6 - i) % 6 } else { (shift + i) % 6 };
                    perm[labels[j] as usize]
                })
                .collect();
            prop_assert_eq!(canonical_form(&moved), c);
        }
    }
}
