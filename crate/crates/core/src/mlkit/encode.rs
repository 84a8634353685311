use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Input representation fed to a model.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Encoding {
    /// Plücker coordinates, zero-padded.
    Plucker,
    /// Flattened vertex coordinates, zero-padded.
    Vertices,
    /// Plücker coordinates followed by all pairwise gcds.
    PluckerGcd2,
    /// Plücker coordinates followed by the gcds of all coordinates but one.
    PluckerGcdL1,
    /// Per-coordinate one-hot over `[-window, window]` plus two overflow slots.
    OneHot { window: i64 },
    /// Plücker coordinates without the last one, then the volume.
    InverseProblem,
}

impl Encoding {
    pub const DEFAULT_ONEHOT_WINDOW: i64 = 20;

    pub fn name(&self) -> &'static str {
        match self {
            Encoding::Plucker => "plucker",
            Encoding::Vertices => "vertices",
            Encoding::PluckerGcd2 => "plucker+gcd2",
            Encoding::PluckerGcdL1 => "plucker+gcdl1",
            Encoding::OneHot { .. } => "onehot",
            Encoding::InverseProblem => "inverse-problem",
        }
    }

    /// Length of the unpadded feature vector for `l` Plücker coordinates or
    /// `l` flattened vertex coordinates.
    pub fn natural_len(&self, l: usize) -> usize {
        match self {
            Encoding::Plucker | Encoding::Vertices => l,
            Encoding::PluckerGcd2 => l + l * l.saturating_sub(1) / 2,
            Encoding::PluckerGcdL1 => 2 * l,
            Encoding::OneHot { window } => l * (2 * *window as usize + 3),
            Encoding::InverseProblem => l,
        }
    }
}

impl fmt::Display for Encoding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Encoding::OneHot { window } if *window != Self::DEFAULT_ONEHOT_WINDOW => {
                write!(f, "onehot:{window}")
            }
            e => f.write_str(e.name()),
        }
    }
}

impl FromStr for Encoding {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "plucker" => Encoding::Plucker,
            "vertices" => Encoding::Vertices,
            "plucker+gcd2" | "gcd2" => Encoding::PluckerGcd2,
            "plucker+gcdl1" | "gcdl1" => Encoding::PluckerGcdL1,
            "onehot" => Encoding::OneHot { window: Self::DEFAULT_ONEHOT_WINDOW },
            "inverse-problem" | "inverse" => Encoding::InverseProblem,
            s => match s.strip_prefix("onehot:").map(str::parse::<i64>) {
                Some(Ok(window)) if window >= 0 => Encoding::OneHot { window },
                _ => return Err(Error::Encoding(format!("unknown encoding {s:?}"))),
            },
        })
    }
}

fn pad(mut v: Vec<f64>, pad_to: usize, scheme: Encoding) -> Result<Vec<f64>> {
    if v.len() > pad_to {
        return Err(Error::Encoding(format!("{scheme} needs length {} but pad_to is {pad_to}", v.len())));
    }
    v.resize(pad_to, 0.0);
    Ok(v)
}

/// Features from Plücker coordinates (every scheme except `Vertices`).
///
/// `volume` is only read by [`Encoding::InverseProblem`].
pub fn encode_plucker(coords: &[i64], scheme: Encoding, pad_to: usize, volume: f64) -> Result<Vec<f64>> {
    let base: Vec<f64> = coords.iter().map(|&c| c as f64).collect();
    match scheme {
        Encoding::Plucker => pad(base, pad_to, scheme),
        Encoding::PluckerGcd2 => {
            let mut v = base;
            for i in 0..coords.len() {
                for j in i + 1..coords.len() {
                    v.push(coords[i].gcd(&coords[j]) as f64);
                }
            }
            pad(v, pad_to, scheme)
        }
        Encoding::PluckerGcdL1 => {
            let mut v = base;
            for skip in 0..coords.len() {
                let g = coords.iter().enumerate().filter(|(i, _)| *i != skip).fold(0i64, |g, (_, c)| g.gcd(c));
                v.push(g as f64);
            }
            pad(v, pad_to, scheme)
        }
        Encoding::OneHot { window } => {
            let width = 2 * window as usize + 3;
            let mut v = vec![0.0; coords.len() * width];
            for (i, &c) in coords.iter().enumerate() {
                let slot = (c.clamp(-window - 1, window + 1) + window + 1) as usize;
                v[i * width + slot] = 1.0;
            }
            pad(v, pad_to, scheme)
        }
        Encoding::InverseProblem => {
            let Some((_, rest)) = coords.split_last() else {
                return Err(Error::Encoding("no coordinates to withhold".into()));
            };
            if pad_to == 0 {
                return Err(Error::Encoding("pad_to must leave room for the volume".into()));
            }
            let mut v = pad(rest.iter().map(|&c| c as f64).collect(), pad_to - 1, scheme)?;
            v.push(volume);
            Ok(v)
        }
        Encoding::Vertices => Err(Error::Encoding("vertices encoding needs vertex coordinates".into())),
    }
}

/// Flattened vertex coordinates, zero-padded.
pub fn encode_vertices(vertices: &[Vec<i64>], pad_to: usize) -> Result<Vec<f64>> {
    pad(vertices.iter().flatten().map(|&c| c as f64).collect(), pad_to, Encoding::Vertices)
}

/// The withheld coordinate predicted in the inverse problem.
pub fn inverse_target(coords: &[i64]) -> Option<f64> {
    coords.last().map(|&c| c as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    const PENTAGON: [i64; 10] = [1, -1, 1, 0, -1, 1, 1, 0, -1, 1];

    #[test]
    fn plucker_padding() {
        let v = encode_plucker(&PENTAGON, Encoding::Plucker, 10, 0.0).unwrap();
        assert_eq!(v, PENTAGON.iter().map(|&c| c as f64).collect::<Vec<_>>());
        let v = encode_plucker(&PENTAGON, Encoding::Plucker, 12, 0.0).unwrap();
        assert_eq!(&v[10..], &[0.0, 0.0]);
        assert!(encode_plucker(&PENTAGON, Encoding::Plucker, 9, 0.0).is_err());
    }

    #[test]
    fn gcd_schemes() {
        let v = encode_plucker(&[1, 1, 1], Encoding::PluckerGcd2, 6, 0.0).unwrap();
        assert_eq!(v, vec![1.0; 6]);
        let v = encode_plucker(&[2, 4, 6], Encoding::PluckerGcd2, 6, 0.0).unwrap();
        assert_eq!(v, vec![2.0, 4.0, 6.0, 2.0, 2.0, 2.0]);
        let v = encode_plucker(&[2, 4, 6], Encoding::PluckerGcdL1, 7, 0.0).unwrap();
        assert_eq!(v, vec![2.0, 4.0, 6.0, 2.0, 2.0, 2.0, 0.0]);
        assert_eq!(Encoding::PluckerGcd2.natural_len(10), 55);
    }

    #[test]
    fn onehot_clips() {
        let e = Encoding::OneHot { window: 1 };
        let v = encode_plucker(&[-5, 0, 1], e, 16, 0.0).unwrap();
        // slots per coordinate: below, -1, 0, 1, above
        assert_eq!(&v[..5], &[1.0, 0.0, 0.0, 0.0, 0.0]);
        assert_eq!(&v[5..10], &[0.0, 0.0, 1.0, 0.0, 0.0]);
        assert_eq!(&v[10..15], &[0.0, 0.0, 0.0, 1.0, 0.0]);
        assert_eq!(v[15], 0.0);
        assert_eq!(v.iter().sum::<f64>(), 3.0);
    }

    #[test]
    fn inverse_problem_layout() {
        let v = encode_plucker(&PENTAGON, Encoding::InverseProblem, 10, 5.0).unwrap();
        assert_eq!(v.len(), 10);
        assert_eq!(v[9], 5.0);
        assert_eq!(&v[..9], &PENTAGON[..9].iter().map(|&c| c as f64).collect::<Vec<_>>()[..]);
        assert_eq!(inverse_target(&PENTAGON), Some(1.0));
    }

    #[test]
    fn vertices_and_names() {
        let v = encode_vertices(&[vec![1, 0], vec![0, 1], vec![-1, -1]], 8).unwrap();
        assert_eq!(v, vec![1.0, 0.0, 0.0, 1.0, -1.0, -1.0, 0.0, 0.0]);
        for e in [
            Encoding::Plucker,
            Encoding::Vertices,
            Encoding::PluckerGcd2,
            Encoding::PluckerGcdL1,
            Encoding::OneHot { window: 20 },
            Encoding::OneHot { window: 3 },
            Encoding::InverseProblem,
        ] {
            assert_eq!(e.to_string().parse::<Encoding>().unwrap(), e);
        }
        assert!("nonsense".parse::<Encoding>().is_err());
    }
}
