//! TOML run configuration. Every key is optional; command-line flags win.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use escdyn::harness::SampleSpec;
use escdyn::{EscapeConfig, Window};
use serde::Deserialize;

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    #[serde(default)]
    pub run: RunSection,
    #[serde(default)]
    pub escape: EscapeSection,
    #[serde(default)]
    pub orbit: OrbitSection,
    #[serde(default)]
    pub raster: RasterSection,
    #[serde(default)]
    pub singular: SingularSection,
    #[serde(default)]
    pub samples: SamplesSection,
    #[serde(default)]
    pub verify: VerifySection,
    #[serde(default)]
    pub report: ReportSection,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunSection {
    pub threads: Option<usize>,
    #[serde(rename = "fn")]
    pub function: Option<String>,
    pub z: Option<String>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EscapeSection {
    pub max_iter: Option<usize>,
    pub hard_radius: Option<f64>,
    pub fatou_re_threshold: Option<f64>,
    pub bounded_capture_eps: Option<f64>,
    pub bounded_multiplier_margin: Option<f64>,
    pub attractor_search: Option<bool>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OrbitSection {
    pub steps: Option<usize>,
    pub out: Option<PathBuf>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RasterSection {
    pub window: Option<String>,
    pub px: Option<String>,
    pub out: Option<PathBuf>,
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SingularSection {
    #[serde(rename = "K")]
    pub truncation: Option<u32>,
    pub out: Option<PathBuf>,
    pub bound: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SamplesSection {
    /// `grid` or `random`.
    pub mode: Option<String>,
    pub width: Option<usize>,
    pub height: Option<usize>,
    pub count: Option<usize>,
    pub seed: Option<u64>,
    pub window: Option<String>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifySection {
    pub suite: Option<String>,
    pub pair: Option<String>,
    pub out_dir: Option<PathBuf>,
    #[serde(rename = "K")]
    pub truncation: Option<u32>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReportSection {
    pub dir: Option<PathBuf>,
    pub out: Option<PathBuf>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<FileConfig> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        toml::from_str(&text).with_context(|| format!("parsing config {}", path.display()))
    }

    /// Escape settings from the file, with `max_iter` overridden by a flag.
    pub fn escape_config(&self, max_iter: Option<usize>) -> Result<EscapeConfig> {
        let e = &self.escape;
        let d = EscapeConfig::default();
        let cfg = EscapeConfig {
            max_iter: max_iter.or(e.max_iter).unwrap_or(d.max_iter),
            hard_radius: e.hard_radius.unwrap_or(d.hard_radius),
            fatou_re_threshold: e.fatou_re_threshold.unwrap_or(d.fatou_re_threshold),
            bounded_capture_eps: e.bounded_capture_eps.unwrap_or(d.bounded_capture_eps),
            bounded_multiplier_margin: e.bounded_multiplier_margin.unwrap_or(d.bounded_multiplier_margin),
            attractor_search: e.attractor_search.unwrap_or(d.attractor_search),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Sample override from the `[samples]` section, if any key is set.
    pub fn samples(&self) -> Result<Option<SampleSpec>> {
        let s = &self.samples;
        if s.mode.is_none() && s.width.is_none() && s.height.is_none() && s.count.is_none() && s.window.is_none() {
            return Ok(None);
        }
        let window = match &s.window {
            Some(w) => parse_window(w)?,
            None => Window::new(-8.0, 8.0, -8.0, 8.0),
        };
        let spec = match s.mode.as_deref().unwrap_or("random") {
            "grid" => SampleSpec::grid(window, s.width.unwrap_or(256), s.height.unwrap_or(256)),
            "random" => SampleSpec::random(window, s.count.unwrap_or(1000), s.seed.unwrap_or(0)),
            other => bail!("samples.mode must be grid or random, got {other:?}"),
        };
        spec.validate()?;
        Ok(Some(spec))
    }
}

/// `re_min,re_max,im_min,im_max`.
pub fn parse_window(text: &str) -> Result<Window> {
    let parts = text
        .split(',')
        .map(|p| p.trim().parse::<f64>().with_context(|| format!("bad window bound {p:?}")))
        .collect::<Result<Vec<_>>>()?;
    let [re_min, re_max, im_min, im_max] = parts[..] else {
        bail!("window needs four comma-separated numbers, got {text:?}");
    };
    let w = Window::new(re_min, re_max, im_min, im_max);
    if !w.is_valid() {
        bail!("window must satisfy re_min < re_max and im_min < im_max");
    }
    Ok(w)
}

/// `WIDTHxHEIGHT`.
pub fn parse_size(text: &str) -> Result<(usize, usize)> {
    let (w, h) = text.split_once(['x', 'X']).with_context(|| format!("size must look like 640x480, got {text:?}"))?;
    let w: usize = w.parse().with_context(|| format!("bad width {w:?}"))?;
    let h: usize = h.parse().with_context(|| format!("bad height {h:?}"))?;
    if w == 0 || h == 0 {
        bail!("size must be positive, got {text:?}");
    }
    Ok((w, h))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn windows_and_sizes() {
        let w = parse_window("-1,1,-2,2").unwrap();
        assert_eq!((w.re_min, w.im_max), (-1.0, 2.0));
        assert!(parse_window("1,-1,0,1").is_err());
        assert!(parse_window("1,2,3").is_err());
        assert_eq!(parse_size("64x48").unwrap(), (64, 48));
        assert!(parse_size("64").is_err());
        assert!(parse_size("0x4").is_err());
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(toml::from_str::<FileConfig>("[escape]\nmax_itr = 3\n").is_err());
        assert!(toml::from_str::<FileConfig>("[nope]\n").is_err());
        let c: FileConfig =
            toml::from_str("[escape]\nmax_iter = 3\n[samples]\nmode = \"grid\"\nwidth = 4\nheight = 2\n").unwrap();
        assert_eq!(c.escape_config(None).unwrap().max_iter, 3);
        assert_eq!(c.escape_config(Some(9)).unwrap().max_iter, 9);
        assert_eq!(c.samples().unwrap().unwrap().points().len(), 8);
    }
}
