use std::fmt;

use crate::model::{AttributeType, DataAttribute, Literal, PrimitiveType};

/// Static type of an attribute, measure or operand.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Ty {
    Prim(PrimitiveType),
    Enum(String),
    Dim(String),
    Other(String),
    /// Type could not be determined (opaque expression or earlier error).
    Unknown,
}

impl Ty {
    pub fn of_attribute(a: &DataAttribute) -> Ty {
        match &a.attr_type {
            AttributeType::Primitive { name, .. } => Ty::Prim(*name),
            AttributeType::EnumerationRef { enumeration } => Ty::Enum(enumeration.clone()),
            AttributeType::DimensionRef { entity } => Ty::Dim(entity.clone()),
            AttributeType::Extension { name } => Ty::Other(name.clone()),
        }
    }

    pub fn of_literal(l: &Literal) -> Ty {
        match l {
            Literal::Number(n) if n.fract() == 0.0 => Ty::Prim(PrimitiveType::Integer),
            Literal::Number(_) => Ty::Prim(PrimitiveType::Decimal),
            Literal::Text(_) => Ty::Prim(PrimitiveType::String),
            Literal::Bool(_) => Ty::Prim(PrimitiveType::Boolean),
        }
    }

    pub fn is_numeric(&self) -> bool {
        matches!(self, Ty::Prim(p) if p.is_numeric())
    }

    pub fn is_known(&self) -> bool {
        !matches!(self, Ty::Unknown)
    }

    /// Whether a value of type `found` may be stored in an attribute declared
    /// as `self`. Integers widen to Decimal.
    pub fn accepts(&self, found: &Ty) -> bool {
        match (self, found) {
            (_, Ty::Unknown) | (Ty::Unknown, _) => true,
            (Ty::Prim(PrimitiveType::Decimal), Ty::Prim(PrimitiveType::Integer)) => true,
            (a, b) => a == b,
        }
    }

    /// Whether two operands may be compared with `=`. Strings stand in for
    /// dates, times and UUIDs written as literals.
    pub fn comparable(&self, other: &Ty) -> bool {
        use PrimitiveType::*;
        match (self, other) {
            (Ty::Unknown, _) | (_, Ty::Unknown) => true,
            (a, b) if a.is_numeric() && b.is_numeric() => true,
            (Ty::Prim(Date | Time | DateTime | Uuid), Ty::Prim(String))
            | (Ty::Prim(String), Ty::Prim(Date | Time | DateTime | Uuid)) => true,
            (a, b) => a == b,
        }
    }
}

impl fmt::Display for Ty {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ty::Prim(p) => write!(f, "{p}"),
            Ty::Enum(e) => write!(f, "enumeration {e}"),
            Ty::Dim(e) => write!(f, "reference to {e}"),
            Ty::Other(n) => f.write_str(n),
            Ty::Unknown => f.write_str("unknown"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decimal_accepts_integer_but_not_the_reverse() {
        let int = Ty::Prim(PrimitiveType::Integer);
        let dec = Ty::Prim(PrimitiveType::Decimal);
        assert!(dec.accepts(&int));
        assert!(!int.accepts(&dec));
        assert!(int.comparable(&dec));
    }

    #[test]
    fn literal_types() {
        assert_eq!(Ty::of_literal(&Literal::Number(3.0)), Ty::Prim(PrimitiveType::Integer));
        assert_eq!(Ty::of_literal(&Literal::Number(0.5)), Ty::Prim(PrimitiveType::Decimal));
        assert!(Ty::Prim(PrimitiveType::Date).comparable(&Ty::of_literal(&Literal::Text("2023-01-01".into()))));
        assert!(!Ty::Prim(PrimitiveType::Boolean).comparable(&Ty::Prim(PrimitiveType::Integer)));
    }
}
