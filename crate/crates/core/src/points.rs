use crate::error::{Error, Result};

/// A set of `k`-dimensional points stored row-major, each carrying an opaque
/// payload that travels with it through every reordering.
#[derive(Debug, Clone, PartialEq)]
pub struct Points {
    dims: usize,
    coords: Vec<f64>,
    payloads: Vec<u64>,
}

impl Points {
    pub fn new(dims: usize) -> Result<Self> {
        Self::with_capacity(dims, 0)
    }

    pub fn with_capacity(dims: usize, capacity: usize) -> Result<Self> {
        if dims == 0 {
            return Err(Error::ZeroDims);
        }
        Ok(Self {
            dims,
            coords: Vec::with_capacity(capacity * dims),
            payloads: Vec::with_capacity(capacity),
        })
    }

    /// Builds a point set from rows; each row's payload is its input index.
    pub fn from_rows<R: AsRef<[f64]>>(dims: usize, rows: &[R]) -> Result<Self> {
        let mut points = Self::with_capacity(dims, rows.len())?;
        for (i, row) in rows.iter().enumerate() {
            points.push(row.as_ref(), i as u64)?;
        }
        Ok(points)
    }

    /// Builds a point set from a flat row-major coordinate buffer and payloads.
    pub fn from_flat(dims: usize, coords: Vec<f64>, payloads: Vec<u64>) -> Result<Self> {
        if dims == 0 {
            return Err(Error::ZeroDims);
        }
        if coords.len() != payloads.len() * dims {
            return Err(Error::DimensionMismatch {
                expected: payloads.len() * dims,
                got: coords.len(),
            });
        }
        Ok(Self {
            dims,
            coords,
            payloads,
        })
    }

    pub fn push(&mut self, coords: &[f64], payload: u64) -> Result<()> {
        if coords.len() != self.dims {
            return Err(Error::DimensionMismatch {
                expected: self.dims,
                got: coords.len(),
            });
        }
        self.coords.extend_from_slice(coords);
        self.payloads.push(payload);
        Ok(())
    }

    #[inline]
    pub fn dims(&self) -> usize {
        self.dims
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.payloads.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.payloads.is_empty()
    }

    #[inline]
    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dims..(i + 1) * self.dims]
    }

    #[inline]
    pub fn coord(&self, i: usize, dim: usize) -> f64 {
        self.coords[i * self.dims + dim]
    }

    #[inline]
    pub fn payload(&self, i: usize) -> u64 {
        self.payloads[i]
    }

    pub fn payloads(&self) -> &[u64] {
        &self.payloads
    }

    pub fn as_flat(&self) -> &[f64] {
        &self.coords
    }

    pub fn iter(&self) -> impl ExactSizeIterator<Item = (&[f64], u64)> + '_ {
        self.coords
            .chunks_exact(self.dims)
            .zip(self.payloads.iter().copied())
    }

    /// Column `dim` as a vector, handy for comparing against printed tables.
    pub fn column(&self, dim: usize) -> Vec<f64> {
        (0..self.len()).map(|i| self.coord(i, dim)).collect()
    }

    /// Rejects NaN and infinities.
    pub fn validate_finite(&self) -> Result<()> {
        for (i, p) in self.coords.chunks_exact(self.dims).enumerate() {
            if let Some(dim) = p.iter().position(|c| !c.is_finite()) {
                return Err(Error::NonFinite { point: i, dim });
            }
        }
        Ok(())
    }

    #[inline]
    pub(crate) fn swap(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        let k = self.dims;
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        let (head, tail) = self.coords.split_at_mut(hi * k);
        head[lo * k..(lo + 1) * k].swap_with_slice(&mut tail[..k]);
        self.payloads.swap(a, b);
    }

    /// Reorders so that new position `i` holds the point previously at `order[i]`.
    pub fn permute(&mut self, order: &[u32]) {
        let mut order = order.to_vec();
        apply_permutation(&mut order, |a, b| self.swap(a, b));
    }
}

const VISITED: u32 = 1 << 31;

/// Applies the gather permutation `order` (new slot `i` takes old slot `order[i]`)
/// in place through `swap`, following cycles. `order` is consumed as scratch:
/// its high bit marks visited slots, so every entry must be below `2^31`.
pub(crate) fn apply_permutation(order: &mut [u32], mut swap: impl FnMut(usize, usize)) {
    for start in 0..order.len() {
        if order[start] & VISITED != 0 {
            continue;
        }
        let mut j = start;
        loop {
            let next = order[j] as usize;
            order[j] |= VISITED;
            if next == start {
                break;
            }
            swap(j, next);
            j = next;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_shapes() {
        assert_eq!(Points::new(0), Err(Error::ZeroDims));
        let mut p = Points::new(2).unwrap();
        assert_eq!(
            p.push(&[1.0], 0),
            Err(Error::DimensionMismatch {
                expected: 2,
                got: 1
            })
        );
        assert!(Points::from_flat(2, vec![1.0, 2.0, 3.0], vec![0, 1]).is_err());
    }

    #[test]
    fn finite_check_names_the_offender() {
        let p = Points::from_rows(2, &[[1.0, 2.0], [3.0, f64::NAN]]).unwrap();
        assert_eq!(
            p.validate_finite(),
            Err(Error::NonFinite { point: 1, dim: 1 })
        );
        let p = Points::from_rows(1, &[[f64::INFINITY]]).unwrap();
        assert!(p.validate_finite().is_err());
    }

    #[test]
    fn permute_gathers() {
        let mut p =
            Points::from_rows(2, &[[0.0, 10.0], [1.0, 11.0], [2.0, 12.0], [3.0, 13.0]]).unwrap();
        p.permute(&[2, 0, 3, 1]);
        assert_eq!(p.column(0), vec![2.0, 0.0, 3.0, 1.0]);
        assert_eq!(p.column(1), vec![12.0, 10.0, 13.0, 11.0]);
        assert_eq!(p.payloads(), &[2, 0, 3, 1]);
    }

    #[test]
    fn permute_handles_fixed_points_and_long_cycles() {
        let n = 9;
        let order: Vec<u32> = vec![0, 5, 2, 8, 1, 3, 6, 4, 7];
        let mut values: Vec<u32> = (100..100 + n).collect();
        let mut scratch = order.clone();
        apply_permutation(&mut scratch, |a, b| values.swap(a, b));
        let expected: Vec<u32> = order.iter().map(|&o| 100 + o).collect();
        assert_eq!(values, expected);
    }
}
