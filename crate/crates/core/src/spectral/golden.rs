//! Golden-section search for the minimum of a unimodal function on an interval.

const INV_PHI: f64 = 0.618_033_988_749_894_8;

/// Minimizes `f` on `[a, b]` until the bracket is narrower than `tol`.
/// Returns the best abscissa seen and its value. Errors from `f` abort the search.
pub fn golden_section_min<F, E>(mut f: F, mut a: f64, mut b: f64, tol: f64) -> Result<(f64, f64), E>
where
    F: FnMut(f64) -> Result<f64, E>,
{
    if a > b {
        std::mem::swap(&mut a, &mut b);
    }
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c)?;
    let mut fd = f(d)?;
    while (b - a).abs() > tol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d)?;
        }
    }
    Ok(if fc < fd { (c, fc) } else { (d, fd) })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parabola() {
        let (x, fx) = golden_section_min(|x| Ok::<_, ()>((x - 0.3).powi(2) + 1.0), 0.0, 1.0, 1e-8).unwrap();
        assert!((x - 0.3).abs() < 1e-7);
        assert!((fx - 1.0).abs() < 1e-12);
    }

    #[test]
    fn sharp_cusp() {
        let (x, _) = golden_section_min(|x| Ok::<_, ()>((x - 0.61).abs().sqrt()), 0.5, 0.7, 1e-6).unwrap();
        assert!((x - 0.61).abs() < 1e-6);
    }

    #[test]
    fn errors_propagate() {
        let r = golden_section_min(|_| Err::<f64, _>("boom"), 0.0, 1.0, 1e-3);
        assert_eq!(r, Err("boom"));
    }
}
