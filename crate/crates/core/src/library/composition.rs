use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

macro_rules! elements {
    ($($variant:ident => $symbol:literal),+ $(,)?) => {
        /// Chemical elements the formula parser understands.
        #[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
        pub enum Element {
            $($variant),+
        }

        impl Element {
            pub const ALL: &'static [Element] = &[$(Element::$variant),+];

            pub fn symbol(self) -> &'static str {
                match self {
                    $(Element::$variant => $symbol),+
                }
            }

            pub fn from_symbol(symbol: &str) -> Option<Element> {
                match symbol {
                    $($symbol => Some(Element::$variant),)+
                    _ => None,
                }
            }
        }
    };
}

elements! {
    H => "H", B => "B", C => "C", N => "N", O => "O", F => "F",
    Na => "Na", Si => "Si", P => "P", S => "S", Cl => "Cl", K => "K",
    Fe => "Fe", Ni => "Ni", Cu => "Cu", Zn => "Zn", Br => "Br", I => "I",
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

/// A multiset of atoms. Zero counts are never stored.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Composition {
    counts: BTreeMap<Element, u64>,
}

impl Composition {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_counts<I: IntoIterator<Item = (Element, u64)>>(counts: I) -> Self {
        let mut c = Self::new();
        for (element, n) in counts {
            c.add(element, n);
        }
        c
    }

    pub fn parse(text: &str) -> Result<Self> {
        parse_formula(text)
    }

    pub fn count(&self, element: Element) -> u64 {
        self.counts.get(&element).copied().unwrap_or(0)
    }

    pub fn add(&mut self, element: Element, n: u64) {
        if n > 0 {
            *self.counts.entry(element).or_insert(0) += n;
        }
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn total_atoms(&self) -> u64 {
        self.counts.values().sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Element, u64)> + '_ {
        self.counts.iter().map(|(e, n)| (*e, *n))
    }

    /// Multiset union.
    pub fn combined(&self, other: &Composition) -> Composition {
        let mut out = self.clone();
        for (e, n) in other.iter() {
            out.add(e, n);
        }
        out
    }

    pub fn scaled(&self, factor: u64) -> Composition {
        Composition::from_counts(self.iter().map(|(e, n)| (e, n * factor)))
    }

    /// `self − other`, or the first element that would go negative.
    pub fn checked_sub(&self, other: &Composition) -> std::result::Result<Composition, Element> {
        let mut out = self.clone();
        for (e, n) in other.iter() {
            let have = out.count(e);
            if have < n {
                return Err(e);
            }
            if have == n {
                out.counts.remove(&e);
            } else {
                out.counts.insert(e, have - n);
            }
        }
        Ok(out)
    }

    /// Elements in Hill order: C, then H, then the rest alphabetically.
    /// Without carbon everything is alphabetical.
    pub fn hill_order(&self) -> Vec<(Element, u64)> {
        let has_carbon = self.count(Element::C) > 0;
        let mut items: Vec<(Element, u64)> = self.iter().collect();
        items.sort_by_key(|(e, _)| {
            let rank = match (has_carbon, e) {
                (true, Element::C) => 0,
                (true, Element::H) => 1,
                _ => 2,
            };
            (rank, e.symbol())
        });
        items
    }
}

impl fmt::Display for Composition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (e, n) in self.hill_order() {
            if n == 1 {
                write!(f, "{e}")?;
            } else {
                write!(f, "{e}{n}")?;
            }
        }
        Ok(())
    }
}

impl FromStr for Composition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_formula(s)
    }
}

/// Parses a flat formula such as `C284H190F320N4S12`.
///
/// Grammar: one or more `Symbol [count]`, symbol = uppercase letter plus an
/// optional lowercase letter, count = decimal digits (absent means 1).
/// Repeated symbols accumulate.
pub fn parse_formula(text: &str) -> Result<Composition> {
    let bytes = text.as_bytes();
    if bytes.is_empty() {
        return Err(formula_error(0, "empty formula"));
    }
    let mut out = Composition::new();
    let mut i = 0;
    while i < bytes.len() {
        let start = i;
        if !bytes[i].is_ascii_uppercase() {
            return Err(formula_error(
                i,
                format!("expected element symbol, found {:?}", bytes[i] as char),
            ));
        }
        i += 1;
        if i < bytes.len() && bytes[i].is_ascii_lowercase() {
            i += 1;
        }
        let symbol = &text[start..i];
        let element = Element::from_symbol(symbol)
            .ok_or_else(|| formula_error(start, format!("unknown element {symbol:?}")))?;

        let digits_start = i;
        while i < bytes.len() && bytes[i].is_ascii_digit() {
            i += 1;
        }
        let count = if digits_start == i {
            1
        } else {
            let digits = &text[digits_start..i];
            let n: u64 = digits
                .parse()
                .map_err(|_| formula_error(digits_start, format!("count {digits} is too large")))?;
            if n == 0 {
                return Err(formula_error(digits_start, format!("zero count for {symbol}")));
            }
            n
        };
        out.add(element, count);
    }
    Ok(out)
}

fn formula_error(position: usize, message: impl Into<String>) -> Error {
    Error::Formula {
        position,
        message: message.into(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn l12_atom_count() {
        let c = parse_formula("C284H190F320N4S12").unwrap();
        assert_eq!(c.total_atoms(), 810);
        assert_eq!(c.count(Element::F), 320);
        assert_eq!(c.count(Element::S), 12);
    }

    #[test]
    fn single_atom() {
        let c = parse_formula("H").unwrap();
        assert_eq!(c, Composition::from_counts([(Element::H, 1)]));
    }

    #[test]
    fn tppf20_round_trip() {
        let text = "C44H10F20N4";
        assert_eq!(parse_formula(text).unwrap().to_string(), text);
    }

    #[test]
    fn hill_order_without_carbon_is_alphabetical() {
        let c = parse_formula("SO4H2").unwrap();
        assert_eq!(c.to_string(), "H2O4S");
        let c = parse_formula("NaCl").unwrap();
        assert_eq!(c.to_string(), "ClNa");
        assert_eq!(parse_formula("FSC20H15F25").unwrap().to_string(), "C20H15F26S");
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(parse_formula(""), Err(Error::Formula { .. })));
        assert!(matches!(
            parse_formula("C2Xx3"),
            Err(Error::Formula { position: 2, .. })
        ));
        assert!(matches!(parse_formula("C0H4"), Err(Error::Formula { position: 1, .. })));
        assert!(matches!(parse_formula("c2"), Err(Error::Formula { position: 0, .. })));
        assert!(parse_formula("C(CH3)2").is_err());
        assert!(parse_formula("C99999999999999999999999").is_err());
    }

    #[test]
    fn checked_sub_reports_element() {
        let a = parse_formula("C2H6").unwrap();
        let b = parse_formula("CH2F").unwrap();
        assert_eq!(a.checked_sub(&b), Err(Element::F));
        assert_eq!(a.checked_sub(&parse_formula("C2H6").unwrap()), Ok(Composition::new()));
    }

    fn arb_composition() -> impl Strategy<Value = Composition> {
        proptest::collection::vec((0..Element::ALL.len(), 1u64..500), 0..8).prop_map(|items| {
            Composition::from_counts(items.into_iter().map(|(i, n)| (Element::ALL[i], n)))
        })
    }

    proptest! {
        #[test]
        fn canonical_text_round_trips(c in arb_composition()) {
            prop_assume!(!c.is_empty());
            let text = c.to_string();
            let parsed = parse_formula(&text).unwrap();
            prop_assert_eq!(&parsed, &c);
            prop_assert_eq!(parsed.to_string(), text);
        }

        #[test]
        fn atom_counts_add(a in arb_composition(), b in arb_composition()) {
            prop_assert_eq!(a.combined(&b).total_atoms(), a.total_atoms() + b.total_atoms());
        }
    }
}
