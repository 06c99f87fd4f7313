//! Group description files.

use serde::{Deserialize, Serialize};

use crate::catalog::Constructor;
use crate::error::{Error, Result};
use crate::group::PermGroup;
use crate::perm::parse_cycles;

/// `{"name", "degree", "generators"}` or `{"name", "constructor"}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GroupSpecFile {
    Explicit { name: String, degree: usize, generators: Vec<String> },
    Named { name: String, constructor: String },
}

impl GroupSpecFile {
    pub fn name(&self) -> &str {
        match self {
            GroupSpecFile::Explicit { name, .. } | GroupSpecFile::Named { name, .. } => name,
        }
    }

    pub fn build(&self, order_cap: usize) -> Result<PermGroup> {
        if self.name().trim().is_empty() {
            return Err(Error::InvalidInput("group name must be nonempty".into()));
        }
        match self {
            GroupSpecFile::Explicit { degree, generators, .. } => {
                if *degree == 0 {
                    return Err(Error::InvalidInput("degree must be positive".into()));
                }
                let gens = generators.iter().map(|s| parse_cycles(s, *degree)).collect::<Result<Vec<_>>>()?;
                PermGroup::generate(*degree, &gens, order_cap)
            }
            GroupSpecFile::Named { constructor, .. } => constructor.parse::<Constructor>()?.build(order_cap),
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidInput(format!("group file: {e}")))
    }
}

/// A list of group files; names must be unique.
pub fn parse_catalog(text: &str) -> Result<Vec<GroupSpecFile>> {
    let entries: Vec<GroupSpecFile> =
        serde_json::from_str(text).map_err(|e| Error::InvalidInput(format!("catalog file: {e}")))?;
    let mut seen = std::collections::HashSet::new();
    for e in &entries {
        if !seen.insert(e.name().to_string()) {
            return Err(Error::InvalidInput(format!("duplicate group name '{}'", e.name())));
        }
    }
    Ok(entries)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::DEFAULT_ORDER_CAP;

    #[test]
    fn both_shapes() {
        let a = GroupSpecFile::parse(r#"{"name": "s3", "degree": 3, "generators": ["(1 2)", "(1,2,3)"]}"#).unwrap();
        assert_eq!(a.build(DEFAULT_ORDER_CAP).unwrap().order(), 6);
        let b = GroupSpecFile::parse(r#"{"name": "h", "constructor": "heisenberg:3"}"#).unwrap();
        assert_eq!(b.build(DEFAULT_ORDER_CAP).unwrap().order(), 27);
        assert!(GroupSpecFile::parse(r#"{"name": "x"}"#).is_err());
        let empty = GroupSpecFile::Named { name: " ".into(), constructor: "q8".into() };
        assert!(empty.build(DEFAULT_ORDER_CAP).is_err());
    }

    #[test]
    fn catalog_names_unique() {
        let text = r#"[{"name": "a", "constructor": "q8"}, {"name": "a", "constructor": "cyclic:3"}]"#;
        assert!(parse_catalog(text).is_err());
    }
}
