use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};

use num_bigint::BigInt;
use num_traits::FromPrimitive;

use super::{Ident, ModelError};

/// A finite decimal number. Negative zero is normalised to zero so that
/// structural equality and ordering agree.
#[derive(Clone, Copy, Debug)]
pub struct Decimal(f64);

impl Decimal {
    pub fn new(x: f64) -> Result<Self, ModelError> {
        if !x.is_finite() {
            return Err(ModelError::NonFiniteDecimal);
        }
        Ok(Decimal(if x == 0.0 { 0.0 } else { x }))
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

impl PartialEq for Decimal {
    fn eq(&self, other: &Self) -> bool {
        self.0.to_bits() == other.0.to_bits()
    }
}

impl Eq for Decimal {}

impl Hash for Decimal {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.to_bits().hash(state);
    }
}

impl PartialOrd for Decimal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Decimal {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0)
    }
}

impl fmt::Display for Decimal {
    /// Shortest representation that reads back to the same `f64`, always
    /// containing a `.` so it never reads back as an integer.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = format!("{}", self.0);
        if s.contains('.') {
            f.write_str(&s)
        } else {
            write!(f, "{s}.0")
        }
    }
}

/// A numeric operand: integers are arbitrary precision, decimals are finite.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Number {
    Int(BigInt),
    Dec(Decimal),
}

impl Number {
    /// Comparison on the number line, exact across the two representations.
    pub fn cmp_numeric(&self, other: &Number) -> Ordering {
        match (self, other) {
            (Number::Int(a), Number::Int(b)) => a.cmp(b),
            (Number::Dec(a), Number::Dec(b)) => a.0.partial_cmp(&b.0).unwrap_or(Ordering::Equal),
            (Number::Int(a), Number::Dec(b)) => cmp_int_dec(a, *b),
            (Number::Dec(a), Number::Int(b)) => cmp_int_dec(b, *a).reverse(),
        }
    }
}

fn cmp_int_dec(i: &BigInt, d: Decimal) -> Ordering {
    let floor = d.0.floor();
    // `floor` is finite and integral, so the conversion is exact.
    let floor_int = BigInt::from_f64(floor).expect("finite integral f64 converts");
    match i.cmp(&floor_int) {
        Ordering::Less => Ordering::Less,
        Ordering::Greater => Ordering::Greater,
        Ordering::Equal if d.0 == floor => Ordering::Equal,
        Ordering::Equal => Ordering::Less,
    }
}

impl fmt::Display for Number {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Number::Int(i) => write!(f, "{i}"),
            Number::Dec(d) => write!(f, "{d}"),
        }
    }
}

/// The value of a property: a literal or a nested object.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Value {
    Text(String),
    Int(BigInt),
    Dec(Decimal),
    Bool(bool),
    Obj(PropertyBag),
}

impl Value {
    pub fn as_number(&self) -> Option<Number> {
        match self {
            Value::Int(i) => Some(Number::Int(i.clone())),
            Value::Dec(d) => Some(Number::Dec(*d)),
            _ => None,
        }
    }

    pub fn dec(x: f64) -> Result<Self, ModelError> {
        Decimal::new(x).map(Value::Dec)
    }

    /// Equality used by predicates: numbers compare on the number line,
    /// objects compare structurally, other type mismatches are unequal.
    pub fn semantic_eq(&self, other: &Value) -> bool {
        match (self.as_number(), other.as_number()) {
            (Some(a), Some(b)) => a.cmp_numeric(&b) == Ordering::Equal,
            (None, None) => self == other,
            _ => false,
        }
    }

    pub(crate) fn first_reserved_name(&self) -> Option<&Ident> {
        match self {
            Value::Obj(bag) => bag.first_reserved_name(),
            _ => None,
        }
    }
}

impl From<Number> for Value {
    fn from(n: Number) -> Self {
        match n {
            Number::Int(i) => Value::Int(i),
            Number::Dec(d) => Value::Dec(d),
        }
    }
}

impl From<&str> for Value {
    fn from(s: &str) -> Self {
        Value::Text(s.to_owned())
    }
}

impl From<String> for Value {
    fn from(s: String) -> Self {
        Value::Text(s)
    }
}

impl From<i64> for Value {
    fn from(i: i64) -> Self {
        Value::Int(BigInt::from(i))
    }
}

impl From<bool> for Value {
    fn from(b: bool) -> Self {
        Value::Bool(b)
    }
}

impl From<PropertyBag> for Value {
    fn from(bag: PropertyBag) -> Self {
        Value::Obj(bag)
    }
}

/// A named value `⟨name, value⟩`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Property {
    pub name: Ident,
    pub value: Value,
}

impl Property {
    pub fn new(name: &str, value: impl Into<Value>) -> Result<Self, ModelError> {
        Ok(Property {
            name: Ident::new(name)?,
            value: value.into(),
        })
    }
}

/// A finite multiset of properties. Names may repeat with different values;
/// exact duplicates are collapsed. Kept sorted by (name, value).
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PropertyBag {
    properties: Vec<Property>,
}

impl PropertyBag {
    pub fn new(properties: impl IntoIterator<Item = Property>) -> Self {
        let mut properties: Vec<Property> = properties.into_iter().collect();
        properties.sort();
        properties.dedup();
        PropertyBag { properties }
    }

    pub fn empty() -> Self {
        PropertyBag::default()
    }

    /// Convenience constructor from `(name, value)` pairs.
    pub fn from_pairs<V: Into<Value>>(
        pairs: impl IntoIterator<Item = (&'static str, V)>,
    ) -> Result<Self, ModelError> {
        pairs
            .into_iter()
            .map(|(n, v)| Property::new(n, v))
            .collect::<Result<Vec<_>, _>>()
            .map(PropertyBag::new)
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Property> {
        self.properties.iter()
    }

    pub fn len(&self) -> usize {
        self.properties.len()
    }

    pub fn is_empty(&self) -> bool {
        self.properties.is_empty()
    }

    pub fn named<'a>(&'a self, name: &'a str) -> impl Iterator<Item = &'a Property> + 'a {
        self.properties.iter().filter(move |p| p.name.as_str() == name)
    }

    /// Returns a new bag with `property` added.
    pub fn with(&self, property: Property) -> Self {
        PropertyBag::new(self.properties.iter().cloned().chain(Some(property)))
    }

    /// The first reserved name found at any nesting depth.
    pub(crate) fn first_reserved_name(&self) -> Option<&Ident> {
        self.properties.iter().find_map(|p| {
            if p.name.is_reserved() {
                Some(&p.name)
            } else {
                p.value.first_reserved_name()
            }
        })
    }
}

impl<'a> IntoIterator for &'a PropertyBag {
    type Item = &'a Property;
    type IntoIter = std::slice::Iter<'a, Property>;
    fn into_iter(self) -> Self::IntoIter {
        self.properties.iter()
    }
}

impl FromIterator<Property> for PropertyBag {
    fn from_iter<T: IntoIterator<Item = Property>>(iter: T) -> Self {
        PropertyBag::new(iter)
    }
}
