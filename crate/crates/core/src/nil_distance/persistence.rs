use crate::error::Result;
use crate::linalg::{check_normal, spectrum, ComplexMatrix};
use num_complex::Complex64;

/// Smallest 1-based `K` such that every element from position `K` on has an
/// eigenvalue in the open disk; `None` when the last element misses it.
pub fn spectral_persistence(sequence: &[ComplexMatrix], center: Complex64, radius: f64) -> Result<Option<usize>> {
    let mut first = None;
    for (k, m) in sequence.iter().enumerate() {
        check_normal(m)?;
        // Points within rounding of the circle count as outside the open disk.
        let inner = radius * (1.0 - 1e-12);
        let meets = spectrum(m, false)?.points().iter().any(|p| (p.value - center).norm() < inner);
        match (meets, first) {
            (true, None) => first = Some(k + 1),
            (false, _) => first = None,
            _ => {}
        }
    }
    Ok(first)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scalar(x: f64) -> ComplexMatrix {
        ComplexMatrix::from_diagonal(&[Complex64::new(x, 0.0)])
    }

    #[test]
    fn examples() {
        let one = Complex64::new(1.0, 0.0);
        let seq: Vec<_> = (1..=20).map(|k| scalar(1.0 - 1.0 / k as f64)).collect();
        assert_eq!(spectral_persistence(&seq, one, 0.1).unwrap(), Some(11));
        let zeros = vec![scalar(0.0); 5];
        assert_eq!(spectral_persistence(&zeros, Complex64::default(), 0.5).unwrap(), Some(1));
        let seq: Vec<_> = (1..=20).map(|k| scalar(1.0 / k as f64)).collect();
        assert_eq!(spectral_persistence(&seq, one, 0.1).unwrap(), None);
    }

    #[test]
    fn non_normal_element_rejected() {
        let z = Complex64::default();
        let j = ComplexMatrix::from_rows(vec![vec![z, Complex64::new(1.0, 0.0)], vec![z, z]]).unwrap();
        assert!(spectral_persistence(&[j], z, 1.0).is_err());
    }
}
