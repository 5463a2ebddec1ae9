//! Parsers for seed ranges and weight grids given on the command line.

use std::str::FromStr;

/// One seed, an inclusive range `a..b` / `a..=b`, or a comma list of either.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Seeds(pub Vec<u64>);

impl FromStr for Seeds {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut out = Vec::new();
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            if let Some((a, b)) = part.split_once("..") {
                let b = b.strip_prefix('=').unwrap_or(b);
                let a: u64 = a.trim().parse().map_err(|e| format!("bad seed '{a}': {e}"))?;
                let b: u64 = b.trim().parse().map_err(|e| format!("bad seed '{b}': {e}"))?;
                if b < a {
                    return Err(format!("empty seed range {part}"));
                }
                out.extend(a..=b);
            } else {
                out.push(part.parse().map_err(|e| format!("bad seed '{part}': {e}"))?);
            }
        }
        if out.is_empty() {
            return Err("no seeds given".into());
        }
        Ok(Seeds(out))
    }
}

/// Comma list of values or `start:stop:step` (stop included when hit).
#[derive(Clone, Debug, PartialEq)]
pub struct Values(pub Vec<f64>);

impl FromStr for Values {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let num = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("bad number '{t}': {e}"));
        let parts: Vec<&str> = s.split(':').collect();
        let out = match parts.as_slice() {
            [start, stop, step] => {
                let (start, stop, step) = (num(start)?, num(stop)?, num(step)?);
                if !(step > 0.0) || stop < start {
                    return Err(format!("bad range {s}"));
                }
                let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
                // Rounded so that 1.5 + 3*0.05 prints as 1.65.
                (0..count)
                    .map(|k| ((start + k as f64 * step) * 1e10).round() / 1e10)
                    .collect()
            }
            [list] => list
                .split(',')
                .filter(|p| !p.trim().is_empty())
                .map(num)
                .collect::<Result<Vec<_>, _>>()?,
            _ => return Err(format!("expected a list or start:stop:step, got {s}")),
        };
        if out.is_empty() {
            return Err("no values given".into());
        }
        Ok(Values(out))
    }
}
