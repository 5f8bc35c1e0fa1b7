use std::borrow::Borrow;
use std::fmt;
use std::ops::Deref;

use super::ModelError;

/// An identifier matching `[A-Za-z_][A-Za-z0-9_]*`.
///
/// Used for node, arc and class ids as well as property names.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Ident(String);

impl Ident {
    pub fn new(s: impl Into<String>) -> Result<Self, ModelError> {
        let s = s.into();
        if Self::is_valid(&s) {
            Ok(Ident(s))
        } else {
            Err(ModelError::InvalidIdentifier(s))
        }
    }

    pub fn is_valid(s: &str) -> bool {
        let mut chars = s.chars();
        match chars.next() {
            Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
            _ => return false,
        }
        chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// `src` and `dst` are reserved for arc endpoints.
    pub fn is_reserved(&self) -> bool {
        is_reserved_name(&self.0)
    }
}

pub(crate) fn is_reserved_name(name: &str) -> bool {
    name == "src" || name == "dst"
}

impl Deref for Ident {
    type Target = str;
    fn deref(&self) -> &str {
        &self.0
    }
}

impl Borrow<str> for Ident {
    fn borrow(&self) -> &str {
        &self.0
    }
}

impl AsRef<str> for Ident {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Ident {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl TryFrom<&str> for Ident {
    type Error = ModelError;
    fn try_from(s: &str) -> Result<Self, ModelError> {
        Ident::new(s)
    }
}

impl TryFrom<String> for Ident {
    type Error = ModelError;
    fn try_from(s: String) -> Result<Self, ModelError> {
        Ident::new(s)
    }
}
