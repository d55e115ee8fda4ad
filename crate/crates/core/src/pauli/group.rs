use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::{PauliError, PauliString};

/// Result of a closure test on a set of strings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupCheck {
    Group,
    /// `elements[left] · elements[right] = product` is not in the set.
    /// A missing identity is reported as `a · a = I`.
    NotClosed {
        left: usize,
        right: usize,
        product: PauliString,
    },
    Empty,
}

impl GroupCheck {
    pub fn is_group(&self) -> bool {
        matches!(self, GroupCheck::Group)
    }
}

/// Closure test. Pairs are scanned from the last listed element backwards,
/// so the first witness involves the latest elements of the list.
pub fn is_group(elements: &[PauliString]) -> Result<GroupCheck, PauliError> {
    let Some(first) = elements.first() else {
        return Ok(GroupCheck::Empty);
    };
    let width = first.width();
    if let Some(bad) = elements.iter().find(|p| p.width() != width) {
        return Err(PauliError::WidthMismatch {
            left: width,
            right: bad.width(),
        });
    }
    let members: std::collections::HashSet<_> = elements.iter().copied().collect();
    for i in (0..elements.len()).rev() {
        for j in (0..=i).rev() {
            let product = elements[i].mul(&elements[j])?;
            if !members.contains(&product) {
                return Ok(GroupCheck::NotClosed {
                    left: i,
                    right: j,
                    product,
                });
            }
        }
    }
    Ok(GroupCheck::Group)
}

/// Ordered, closed set of equal-width strings with the identity first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OperatorGroup {
    name: Option<String>,
    width: usize,
    elements: Vec<PauliString>,
    index: HashMap<PauliString, usize>,
}

impl OperatorGroup {
    pub fn new(name: Option<String>, elements: Vec<PauliString>) -> Result<Self, PauliError> {
        let first = *elements.first().ok_or(PauliError::Empty)?;
        let width = first.width();
        if !first.is_identity() {
            return Err(PauliError::IdentityNotFirst(first.to_string()));
        }
        let mut index = HashMap::with_capacity(elements.len());
        for (k, p) in elements.iter().enumerate() {
            if p.width() != width {
                return Err(PauliError::WidthMismatch {
                    left: width,
                    right: p.width(),
                });
            }
            if index.insert(*p, k).is_some() {
                return Err(PauliError::Duplicate(p.to_string()));
            }
        }
        match is_group(&elements)? {
            GroupCheck::Group => {}
            GroupCheck::NotClosed {
                left,
                right,
                product,
            } => {
                return Err(PauliError::NotClosed {
                    left: elements[left].to_string(),
                    right: elements[right].to_string(),
                    product: product.to_string(),
                })
            }
            GroupCheck::Empty => return Err(PauliError::Empty),
        }
        Ok(Self {
            name,
            width,
            elements,
            index,
        })
    }

    /// Parses whitespace- or comma-separated strings such as `"II,XI,YI,ZI"`.
    pub fn parse_list(name: Option<String>, list: &str) -> Result<Self, PauliError> {
        let elements = parse_elements(list)?;
        Self::new(name, elements)
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    /// Name if present, otherwise the element list.
    pub fn label(&self) -> String {
        match &self.name {
            Some(n) => n.clone(),
            None => self
                .elements
                .iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
                .join(","),
        }
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    /// `log₂` of the order: bits carried by one element.
    pub fn bits_per_element(&self) -> usize {
        self.elements.len().trailing_zeros() as usize
    }

    pub fn elements(&self) -> &[PauliString] {
        &self.elements
    }

    pub fn element(&self, k: usize) -> PauliString {
        self.elements[k]
    }

    pub fn index_of(&self, p: &PauliString) -> Option<usize> {
        self.index.get(p).copied()
    }

    pub fn contains(&self, p: &PauliString) -> bool {
        self.index.contains_key(p)
    }

    /// Index of `elements[a] · elements[b]`.
    pub fn mul_index(&self, a: usize, b: usize) -> usize {
        let product = self.elements[a]
            .mul(&self.elements[b])
            .expect("group elements share a width");
        self.index[&product]
    }

    /// `table[i][j]` is the index of `gᵢ · gⱼ`.
    pub fn multiplication_table(&self) -> Vec<Vec<usize>> {
        (0..self.order())
            .map(|i| (0..self.order()).map(|j| self.mul_index(i, j)).collect())
            .collect()
    }

    /// Same element set, different listing order. `order` must start with
    /// the identity.
    pub fn reordered(&self, order: &[PauliString]) -> Result<Self, PauliError> {
        let mut sorted_self = self.elements.clone();
        sorted_self.sort();
        let mut sorted_other = order.to_vec();
        sorted_other.sort();
        if sorted_self != sorted_other {
            return Err(PauliError::DifferentElements(self.label()));
        }
        Self::new(self.name.clone(), order.to_vec())
    }

    /// Same group with every element's letters rearranged by `order`
    /// (see [`PauliString::permuted`]).
    pub fn permuted_letters(&self, order: &[usize]) -> Result<Self, PauliError> {
        let elements = self
            .elements
            .iter()
            .map(|p| p.permuted(order))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(None, elements)
    }

    pub fn same_elements(&self, other: &OperatorGroup) -> bool {
        self.order() == other.order() && self.elements.iter().all(|p| other.contains(p))
    }

    pub fn to_json(&self) -> GroupJson {
        GroupJson {
            name: self.name.clone(),
            width: self.width,
            elements: self.elements.iter().map(ToString::to_string).collect(),
        }
    }
}

/// Split a list like `"II, XI YI"` into strings.
pub fn parse_elements(list: &str) -> Result<Vec<PauliString>, PauliError> {
    list.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty())
        .map(str::parse)
        .collect()
}

/// Serialized group: `{name, width, elements: ["IX", ...]}` with `Y` for iY.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupJson {
    pub name: Option<String>,
    pub width: usize,
    pub elements: Vec<String>,
}

impl TryFrom<GroupJson> for OperatorGroup {
    type Error = PauliError;

    fn try_from(json: GroupJson) -> Result<Self, Self::Error> {
        let elements = json
            .elements
            .iter()
            .map(|s| s.parse())
            .collect::<Result<Vec<PauliString>, _>>()?;
        if let Some(p) = elements.iter().find(|p| p.width() != json.width) {
            return Err(PauliError::WidthMismatch {
                left: json.width,
                right: p.width(),
            });
        }
        OperatorGroup::new(json.name, elements)
    }
}

/// All concatenations `g ⊗ h`, first factor varying slowest.
pub fn tensor_groups(g: &OperatorGroup, h: &OperatorGroup) -> OperatorGroup {
    let elements = g
        .elements()
        .iter()
        .flat_map(|a| h.elements().iter().map(move |b| a.tensor(b)))
        .collect::<Result<Vec<_>, _>>()
        .expect("tensor width stays within bounds for catalog groups");
    OperatorGroup::new(None, elements).expect("tensor product of groups is a group")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::named_group;

    fn strings(list: &str) -> Vec<PauliString> {
        parse_elements(list).unwrap()
    }

    #[test]
    fn closure_witness_for_non_group_set() {
        // dense-coding operators for the Bell-notation GHZ-like state
        let set = strings("II XX ZI YI IX XI IY YX");
        match is_group(&set).unwrap() {
            GroupCheck::NotClosed {
                left,
                right,
                product,
            } => {
                assert_eq!((left, right), (7, 6));
                assert_eq!(product.to_string(), "YZ");
            }
            other => panic!("expected a witness, got {other:?}"),
        }
    }

    #[test]
    fn missing_identity_is_reported() {
        let set = strings("XI");
        assert_eq!(
            is_group(&set).unwrap(),
            GroupCheck::NotClosed {
                left: 0,
                right: 0,
                product: "II".parse().unwrap()
            }
        );
        assert_eq!(is_group(&[]).unwrap(), GroupCheck::Empty);
        assert!(is_group(&strings("II")).unwrap().is_group());
    }

    #[test]
    fn constructor_rejects_bad_sets() {
        assert!(matches!(
            OperatorGroup::new(None, strings("XI II")),
            Err(PauliError::IdentityNotFirst(_))
        ));
        assert!(matches!(
            OperatorGroup::new(None, strings("II XI XI")),
            Err(PauliError::Duplicate(_))
        ));
        assert!(matches!(
            OperatorGroup::new(None, strings("II XI ZI")),
            Err(PauliError::NotClosed { .. })
        ));
        assert!(matches!(
            OperatorGroup::new(None, strings("II X")),
            Err(PauliError::WidthMismatch { .. })
        ));
    }

    #[test]
    fn tensor_of_g1_with_trivial_group_widens() {
        let g1 = named_group("G1").unwrap();
        let trivial = OperatorGroup::parse_list(None, "I").unwrap();
        let widened = tensor_groups(&g1, &trivial);
        assert_eq!(
            widened.elements().iter().map(ToString::to_string).collect::<Vec<_>>(),
            vec!["II", "XI", "YI", "ZI"]
        );
    }

    #[test]
    fn tensor_of_g1_with_itself_is_g2_listing() {
        let g1 = named_group("G1").unwrap();
        let g2 = named_group("G2").unwrap();
        assert_eq!(tensor_groups(&g1, &g1).elements(), g2.elements());
        let ix = OperatorGroup::parse_list(None, "I X").unwrap();
        assert!(tensor_groups(&g1, &ix).same_elements(&named_group("G2^1(8)").unwrap()));
    }

    #[test]
    fn json_round_trip() {
        let g = named_group("G2^7(8)").unwrap();
        let json = serde_json::to_string(&g.to_json()).unwrap();
        assert_eq!(
            json,
            r#"{"name":"G2^7(8)","width":2,"elements":["II","IZ","ZI","ZZ","XX","YX","XY","YY"]}"#
        );
        let back: GroupJson = serde_json::from_str(&json).unwrap();
        assert_eq!(OperatorGroup::try_from(back).unwrap(), g);
    }

    #[test]
    fn reorder_keeps_elements() {
        let g = named_group("G2^1(8)").unwrap();
        let table_order = strings("II ZI XI YI IX ZX XX YX");
        let r = g.reordered(&table_order).unwrap();
        assert_eq!(r.name(), Some("G2^1(8)"));
        assert_eq!(r.mul_index(1, 2), 3);
        assert!(g.reordered(&strings("II ZI")).is_err());
    }
}
