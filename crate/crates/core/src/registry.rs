//! Built-in varieties and named identities.

use crate::error::{Error, Result};
use crate::parser::{parse_identity_chain, parse_variety_file, BracketMode, Identity, VarietyDef};
use crate::variety::Variety;

/// Variety definitions in the identity language. `*` is the product of the
/// algebra itself; brackets expand through it.
pub const BUILTIN: &str = "\
variety magma { free }

variety associative {
    (a,b,c) = 0;
}

variety commutative-magma {
    a*b = b*a;
}

variety anticommutative-magma {
    a*b = -(b*a);
}

variety lie {
    a*b = -(b*a);
    (a*b)*c + (b*c)*a + (c*a)*b = 0;
}

variety metabelian-lie {
    a*b = -(b*a);
    (a*b)*c + (b*c)*a + (c*a)*b = 0;
    (a*b)*(c*d) = 0;
}

variety perm {
    (a,b,c) = 0;
    (a*b)*c = (a*c)*b;
}

variety alternative {
    (a,b,c) + (a,c,b) = 0;
    (a,b,c) + (b,a,c) = 0;
}

variety binary-perm {
    (a,b,c) + (a,c,b) = 0;
    (a,b,c) + (b,a,c) = 0;
    (a*b)*c + (c*b)*a = (a*c)*b + (c*a)*b;
}

variety nap {
    (a*b)*c = (a*c)*b;
}

variety pre-lie {
    (a,b,c) = (b,a,c);
}

variety novikov {
    (a,b,c) = (b,a,c);
    (a*b)*c = (a*c)*b;
}

variety malcev {
    a*b = -(b*a);
    (a*b)*(a*c) + (b*(a*c))*a + ((a*c)*a)*b = ((a*b)*c)*a + ((b*c)*a)*a + ((c*a)*b)*a;
}

variety jordan {
    a*b = b*a;
    ((a*a)*b)*a = (a*a)*(b*a);
}
";

/// Identities of the host product, named for reference in checks.
pub const HOST_IDENTITIES: &[(&str, &str)] = &[
    ("right-alt", "(a,b,c) + (a,c,b) = 0"),
    ("left-alt", "(a,b,c) + (b,a,c) = 0"),
    ("exchange", "(a*b)*c + (c*b)*a = (a*c)*b + (c*a)*b"),
    (
        "square-product",
        "(a*b)*(c*d) = -(((c*a)*d)*b) + (a*(c*d))*b + ((c*d)*a)*b",
    ),
    ("tail-rotation", "((a*b)*c)*d = ((a*c)*d)*b = ((a*d)*b)*c"),
    ("right-nested", "a*((b*c)*d) = ((a*c)*b)*d"),
    ("tail-swap", "(((a*b)*c)*d)*e = (((a*b)*c)*e)*d"),
    ("inner-flatten", "((a*(b*c))*d)*e = (((a*b)*c)*d)*e"),
    ("tail-swap-3", "(((a*b)*c)*d)*e = (((a*b)*d)*c)*e"),
    ("mixed-flatten", "(a*(b*c))*(d*e) = (((a*b)*c)*d)*e"),
];

/// Identities of a derived product, written in that product. An entry may
/// list several identities separated by `;`.
pub const DERIVED_IDENTITIES: &[(&str, &str)] = &[
    ("anticom", "[a,b] = -[b,a]"),
    ("comm", "{a,b} = {b,a}"),
    ("jacobi", "J(a,b,c) = 0"),
    ("metabelian", "J(a,b,c) = 0; [[a,b],[c,d]] = 0"),
    ("metabelian-square", "[[a,b],[c,d]] = 0"),
    (
        "square-expansion",
        "[[a,b],[c,d]] = [a,[[d,b],c]] + [d,[[b,c],a]] + [b,[[c,a],d]] + [c,[[a,d],b]]",
    ),
    (
        "left-triple",
        "[[[a,d],c],b] = [[[a,d],b],c] + [[[a,b],d],c] - [[[a,b],c],d]",
    ),
    (
        "tail-symmetry",
        "[[[[a,b],c],d],e] = [[[[a,b],d],c],e] = [[[[a,b],c],e],d]",
    ),
    ("jacobian-nil", "[[J(a,b,c),d],e] = 0"),
    ("malcev", "J(a,b,[a,c]) = [J(a,b,c),a]"),
    ("jordan", "{{{a,a},b},a} = {{a,a},{b,a}}"),
    ("square-symmetry", "{{a,b},{c,d}} = {{a,d},{b,c}}"),
];

fn lookup(table: &[(&str, &str)], name: &str, mode: BracketMode) -> Result<Vec<Identity>> {
    let (_, text) = table
        .iter()
        .find(|(n, _)| *n == name)
        .ok_or_else(|| Error::UnknownSymbol(name.to_string()))?;
    let mut out = Vec::new();
    for part in text.split(';') {
        out.extend(
            parse_identity_chain(part, mode)?
                .into_iter()
                .map(|f| f.named(name)),
        );
    }
    Ok(out)
}

/// A named host identity; chains give several identities.
pub fn host_identity(name: &str) -> Result<Vec<Identity>> {
    lookup(HOST_IDENTITIES, name, BracketMode::Expand)
}

/// A named derived-product identity.
pub fn derived_identity(name: &str) -> Result<Vec<Identity>> {
    lookup(DERIVED_IDENTITIES, name, BracketMode::Derived)
}

/// Several derived identities by name, in order.
pub fn derived_identities(names: &[&str]) -> Result<Vec<Identity>> {
    let mut out = Vec::new();
    for n in names {
        out.extend(derived_identity(n)?);
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct Registry {
    defs: Vec<VarietyDef>,
}

impl Registry {
    pub fn builtin() -> Self {
        Registry {
            defs: parse_variety_file(BUILTIN).expect("built-in registry parses"),
        }
    }

    /// Adds the varieties of `text`. A name already present is an error.
    pub fn extend(&mut self, text: &str) -> Result<()> {
        for def in parse_variety_file(text)? {
            if self.defs.iter().any(|d| d.name == def.name) {
                return Err(Error::DuplicateVariety(def.name));
            }
            self.defs.push(def);
        }
        Ok(())
    }

    pub fn names(&self) -> Vec<&str> {
        self.defs.iter().map(|d| d.name.as_str()).collect()
    }

    pub fn def(&self, name: &str) -> Result<&VarietyDef> {
        self.defs
            .iter()
            .find(|d| d.name == name)
            .ok_or_else(|| Error::UnknownVariety(name.to_string()))
    }

    pub fn variety(&self, name: &str) -> Result<Variety> {
        Ok(Variety::from_def(self.def(name)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_has_all_varieties() {
        let r = Registry::builtin();
        assert_eq!(r.names().len(), 14);
        assert_eq!(r.def("perm").unwrap().identities.len(), 2);
        assert!(r.def("magma").unwrap().identities.is_empty());
        assert!(matches!(r.variety("nosuch"), Err(Error::UnknownVariety(_))));
    }

    #[test]
    fn only_jordan_and_malcev_repeat_variables() {
        let r = Registry::builtin();
        for name in r.names() {
            for f in &r.def(name).unwrap().identities {
                let linear = f.multilinear || name == "jordan" || name == "malcev";
                assert!(linear, "{name}: {f:?}");
            }
        }
        let j = &r.def("jordan").unwrap().identities[1];
        assert!(!j.multilinear);
    }

    #[test]
    fn named_identities_parse() {
        for (n, _) in HOST_IDENTITIES {
            assert!(!host_identity(n).unwrap().is_empty());
        }
        for (n, _) in DERIVED_IDENTITIES {
            assert!(!derived_identity(n).unwrap().is_empty());
        }
        assert_eq!(host_identity("tail-rotation").unwrap().len(), 2);
        assert_eq!(derived_identity("tail-symmetry").unwrap().len(), 2);
        assert_eq!(derived_identity("metabelian").unwrap().len(), 2);
    }

    #[test]
    fn duplicate_names_rejected() {
        let mut r = Registry::builtin();
        assert!(matches!(
            r.extend("variety perm { free }"),
            Err(Error::DuplicateVariety(_))
        ));
        r.extend("variety flexible { (a,b,a) = 0; }").unwrap();
        assert!(r.variety("flexible").is_ok());
    }
}
