use std::fmt;

/// A permutation of `0..n`, stored as its image list. Acts on the right:
/// `x^(ab) = (x^a)^b`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Perm(Vec<u32>);

impl Perm {
    pub fn identity(n: usize) -> Self {
        Perm((0..n as u32).collect())
    }

    /// Builds a permutation from images, checking bijectivity.
    pub fn from_images(images: Vec<u32>) -> Option<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            let x = x as usize;
            if x >= n || seen[x] {
                return None;
            }
            seen[x] = true;
        }
        Some(Perm(images))
    }

    pub(crate) fn from_images_unchecked(images: Vec<u32>) -> Self {
        Perm(images)
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    #[inline]
    pub fn apply(&self, x: u32) -> u32 {
        self.0[x as usize]
    }

    pub fn images(&self) -> &[u32] {
        &self.0
    }

    /// `self` followed by `other`.
    pub fn then(&self, other: &Perm) -> Perm {
        Perm(self.0.iter().map(|&x| other.0[x as usize]).collect())
    }

    /// In-place `self ← self · other`.
    #[inline]
    pub fn then_assign(&mut self, other: &Perm) {
        for x in self.0.iter_mut() {
            *x = other.0[*x as usize];
        }
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0u32; self.0.len()];
        for (i, &x) in self.0.iter().enumerate() {
            inv[x as usize] = i as u32;
        }
        Perm(inv)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &x)| i as u32 == x)
    }

    pub fn first_moved(&self) -> Option<u32> {
        self.0
            .iter()
            .enumerate()
            .find(|(i, &x)| *i as u32 != x)
            .map(|(i, _)| i as u32)
    }

    /// `x⁻¹ · self · x`.
    pub fn conjugate_by(&self, x: &Perm) -> Perm {
        x.inverse().then(self).then(x)
    }

    /// `self⁻¹ · other⁻¹ · self · other`.
    pub fn commutator(&self, other: &Perm) -> Perm {
        self.inverse().then(&other.inverse()).then(self).then(other)
    }

    pub fn pow(&self, mut e: u64) -> Perm {
        let mut base = self.clone();
        let mut acc = Perm::identity(self.degree());
        while e > 0 {
            if e & 1 == 1 {
                acc.then_assign(&base);
            }
            base = base.then(&base);
            e >>= 1;
        }
        acc
    }

    /// Restriction to the first `n` points, which must be an invariant set.
    pub fn restrict(&self, n: usize) -> Perm {
        Perm(self.0[..n].to_vec())
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // cycle notation, fixed points omitted
        let n = self.0.len();
        let mut seen = vec![false; n];
        let mut wrote = false;
        for start in 0..n {
            if seen[start] || self.0[start] as usize == start {
                continue;
            }
            write!(f, "(")?;
            let mut x = start;
            let mut first = true;
            while !seen[x] {
                seen[x] = true;
                if !first {
                    write!(f, ",")?;
                }
                write!(f, "{x}")?;
                first = false;
                x = self.0[x] as usize;
            }
            write!(f, ")")?;
            wrote = true;
        }
        if !wrote {
            write!(f, "()")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn composition_is_right_action() {
        let a = Perm::from_images(vec![1, 2, 0]).unwrap();
        let b = Perm::from_images(vec![0, 2, 1]).unwrap();
        let ab = a.then(&b);
        for x in 0..3 {
            assert_eq!(ab.apply(x), b.apply(a.apply(x)));
        }
        assert!(a.then(&a.inverse()).is_identity());
        assert!(a.pow(3).is_identity());
        assert!(Perm::from_images(vec![0, 0]).is_none());
        assert_eq!(format!("{a:?}"), "(0,1,2)");
    }
}
