use std::fmt;

use super::{Elem, Gf};
use crate::error::{Error, Result};

/// A field element bound to its field. Arithmetic between elements of
/// different fields is rejected by the `try_*` methods.
#[derive(Clone, Copy)]
pub struct FieldElement<'f> {
    field: &'f Gf,
    enc: Elem,
}

impl fmt::Debug for FieldElement<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@{:?}", self.enc, self.field)
    }
}

impl PartialEq for FieldElement<'_> {
    fn eq(&self, other: &Self) -> bool {
        self.enc == other.enc && self.field == other.field
    }
}

impl<'f> FieldElement<'f> {
    pub(super) fn new(field: &'f Gf, enc: Elem) -> Self {
        Self { field, enc }
    }

    pub fn enc(&self) -> Elem {
        self.enc
    }

    pub fn field(&self) -> &'f Gf {
        self.field
    }

    fn same_field(&self, other: &Self) -> Result<&'f Gf> {
        if self.field == other.field {
            Ok(self.field)
        } else {
            Err(Error::CrossField)
        }
    }

    pub fn try_add(self, other: Self) -> Result<Self> {
        let f = self.same_field(&other)?;
        Ok(Self::new(f, f.add(self.enc, other.enc)))
    }

    pub fn try_sub(self, other: Self) -> Result<Self> {
        let f = self.same_field(&other)?;
        Ok(Self::new(f, f.sub(self.enc, other.enc)))
    }

    pub fn try_mul(self, other: Self) -> Result<Self> {
        let f = self.same_field(&other)?;
        Ok(Self::new(f, f.mul(self.enc, other.enc)))
    }

    pub fn inv(self) -> Result<Self> {
        Ok(Self::new(self.field, self.field.inv(self.enc)?))
    }

    pub fn pow(self, e: u128) -> Self {
        Self::new(self.field, self.field.pow(self.enc, e))
    }
}

impl std::ops::Neg for FieldElement<'_> {
    type Output = Self;

    fn neg(self) -> Self {
        Self::new(self.field, self.field.neg(self.enc))
    }
}
