use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::format::sig9;
use crate::model::units::MICROMETRE;

pub const MIN_SAMPLES: usize = 16;

/// Uniformly sampled surface height `h(x)`, both in metres.
#[derive(Debug, Clone, PartialEq)]
pub struct HeightProfile {
    samples: Vec<(f64, f64)>,
}

impl HeightProfile {
    pub fn new(samples: Vec<(f64, f64)>) -> Result<Self> {
        if samples.len() < MIN_SAMPLES {
            return Err(Error::invalid(
                "profile",
                format!("needs at least {MIN_SAMPLES} samples, got {}", samples.len()),
            ));
        }
        let span = samples[samples.len() - 1].0 - samples[0].0;
        if !(span > 0.0) {
            return Err(Error::invalid("profile", "positions must be strictly increasing"));
        }
        let dx = span / (samples.len() - 1) as f64;
        for (i, w) in samples.windows(2).enumerate() {
            if !(w[1].0 > w[0].0) {
                return Err(Error::invalid(
                    "profile",
                    format!("positions not strictly increasing at sample {}", i + 1),
                ));
            }
            if ((w[1].0 - w[0].0) - dx).abs() > 1e-6 * dx {
                return Err(Error::invalid(
                    "profile",
                    format!("non-uniform spacing at sample {}", i + 1),
                ));
            }
        }
        if let Some((i, &(_, h))) = samples
            .iter()
            .enumerate()
            .find(|(_, s)| !(s.1 >= 0.0 && s.1.is_finite()))
        {
            return Err(Error::invalid(
                "profile",
                format!("height {h} at sample {i} is negative or not finite"),
            ));
        }
        Ok(HeightProfile { samples })
    }

    /// Samples `f` at `n` uniform points over `[start, start + span]`.
    pub fn from_fn(start: f64, span: f64, n: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        let samples = (0..n)
            .map(|i| {
                let x = start + span * i as f64 / (n.max(2) - 1) as f64;
                (x, f(x))
            })
            .collect();
        HeightProfile::new(samples)
    }

    pub fn samples(&self) -> &[(f64, f64)] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn start(&self) -> f64 {
        self.samples[0].0
    }

    pub fn end(&self) -> f64 {
        self.samples[self.samples.len() - 1].0
    }

    pub fn span(&self) -> f64 {
        self.end() - self.start()
    }

    pub fn heights(&self) -> impl Iterator<Item = f64> + '_ {
        self.samples.iter().map(|s| s.1)
    }

    pub fn max_height(&self) -> f64 {
        self.heights().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn min_height(&self) -> f64 {
        self.heights().fold(f64::INFINITY, f64::min)
    }

    /// Linear interpolation; positions outside the span take the end values.
    pub fn height_at(&self, x: f64) -> f64 {
        let n = self.samples.len();
        if x <= self.start() {
            return self.samples[0].1;
        }
        if x >= self.end() {
            return self.samples[n - 1].1;
        }
        let dx = self.span() / (n - 1) as f64;
        let i = (((x - self.start()) / dx).floor() as usize).min(n - 2);
        let (x0, h0) = self.samples[i];
        let (x1, h1) = self.samples[i + 1];
        let t = (x - x0) / (x1 - x0);
        h0 + t * (h1 - h0)
    }

    /// Height at the middle of the span.
    pub fn center_height(&self) -> f64 {
        self.height_at(0.5 * (self.start() + self.end()))
    }

    /// Resamples `[start, end]` onto `n` points, re-based so the window starts at 0.
    pub fn window(&self, start: f64, end: f64, n: usize) -> Result<HeightProfile> {
        if !(end > start) {
            return Err(Error::invalid("window", format!("empty range [{start}, {end}]")));
        }
        HeightProfile::from_fn(0.0, end - start, n, |x| self.height_at(start + x))
    }

    /// Number of sharp local maxima.
    ///
    /// A maximum is one sample, or two equal adjacent samples straddling a
    /// crest, strictly above both neighbours. Longer flat tops (the
    /// lithographic plateau) and the end samples are not counted.
    pub fn local_maxima_count(&self) -> usize {
        // collapse runs of equal heights
        let mut runs: Vec<(f64, usize)> = Vec::new();
        for h in self.heights() {
            match runs.last_mut() {
                Some((v, len)) if *v == h => *len += 1,
                _ => runs.push((h, 1)),
            }
        }
        runs.windows(3)
            .filter(|w| w[1].1 <= 2 && w[1].0 > w[0].0 && w[1].0 > w[2].0)
            .count()
    }

    /// Two-column CSV with the given header names; values in µm.
    pub fn to_csv(&self, x_header: &str, h_header: &str) -> String {
        let mut out = String::with_capacity(self.samples.len() * 24);
        let _ = writeln!(out, "{x_header},{h_header}");
        for &(x, h) in &self.samples {
            let _ = writeln!(out, "{},{}", sig9(x / MICROMETRE), sig9(h / MICROMETRE));
        }
        out
    }

    /// Parses a two-column CSV (µm units) with a header row.
    pub fn from_csv(text: &str) -> Result<HeightProfile> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        match lines.next() {
            Some((_, header)) if header.split(',').count() == 2 => {}
            Some((i, _)) => {
                return Err(Error::ProfileFormat {
                    line: i + 1,
                    reason: "expected a two-column header".into(),
                })
            }
            None => {
                return Err(Error::ProfileFormat {
                    line: 1,
                    reason: "empty input".into(),
                })
            }
        }
        let mut samples = Vec::new();
        for (i, line) in lines {
            let fields: Vec<&str> = line.split(',').map(str::trim).collect();
            if fields.len() != 2 {
                return Err(Error::ProfileFormat {
                    line: i + 1,
                    reason: format!("expected 2 columns, found {}", fields.len()),
                });
            }
            let parse = |s: &str| {
                s.parse::<f64>().map_err(|e| Error::ProfileFormat {
                    line: i + 1,
                    reason: format!("{s:?}: {e}"),
                })
            };
            samples.push((parse(fields[0])? * MICROMETRE, parse(fields[1])? * MICROMETRE));
        }
        HeightProfile::new(samples)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ramp(n: usize) -> HeightProfile {
        HeightProfile::from_fn(0.0, 1e-4, n, |x| x * 0.01).unwrap()
    }

    #[test]
    fn validates_samples() {
        assert!(HeightProfile::from_fn(0.0, 1.0, 8, |_| 1.0).is_err());
        assert!(HeightProfile::from_fn(0.0, 1.0, 16, |_| -1.0).is_err());
        let mut s: Vec<(f64, f64)> = (0..16).map(|i| (i as f64, 0.0)).collect();
        s[5].0 = 5.5;
        assert!(HeightProfile::new(s).is_err());
    }

    #[test]
    fn interpolation() {
        let p = ramp(17);
        assert!((p.height_at(5e-5) - 5e-7).abs() < 1e-18);
        assert_eq!(p.height_at(-1.0), 0.0);
        assert!((p.center_height() - 5e-7).abs() < 1e-18);
    }

    #[test]
    fn maxima_counting() {
        let flat_top = HeightProfile::from_fn(0.0, 1.0, 64, |x| if (0.2..0.8).contains(&x) { 1.0 } else { 0.0 })
            .unwrap();
        assert_eq!(flat_top.local_maxima_count(), 0);
        let hump = HeightProfile::from_fn(0.0, 1.0, 64, |x| (std::f64::consts::PI * x).sin()).unwrap();
        assert_eq!(hump.local_maxima_count(), 1);
        let two = HeightProfile::from_fn(0.0, 1.0, 65, |x| (2.0 * std::f64::consts::PI * x).sin().abs())
            .unwrap();
        assert_eq!(two.local_maxima_count(), 2);
    }

    #[test]
    fn csv_round_trip_and_errors() {
        let p = ramp(20);
        let text = p.to_csv("x_um", "h_um");
        assert!(text.starts_with("x_um,h_um\n"));
        let q = HeightProfile::from_csv(&text).unwrap();
        for (a, b) in p.samples().iter().zip(q.samples()) {
            assert!((a.0 - b.0).abs() <= 1e-8 * a.0.abs().max(1e-12));
            assert!((a.1 - b.1).abs() <= 1e-8 * a.1.abs().max(1e-15));
        }
        assert!(matches!(
            HeightProfile::from_csv("x_um,h_um\n1,2,3\n"),
            Err(Error::ProfileFormat { line: 2, .. })
        ));
        assert!(HeightProfile::from_csv("").is_err());
    }

    #[test]
    fn window_rebases() {
        let p = ramp(101);
        let w = p.window(2e-5, 6e-5, 41).unwrap();
        assert_eq!(w.start(), 0.0);
        assert!((w.span() - 4e-5).abs() < 1e-18);
        assert!((w.samples()[0].1 - 2e-7).abs() < 1e-18);
    }
}
