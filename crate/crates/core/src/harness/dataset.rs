//! On-disk datasets: a TOML manifest, raw frames and optional truth records.
//!
//! `frames.bin` holds, for every shot in manifest order, the `|2⟩` frame then
//! the `|1⟩` frame as row-major little-endian `f32`. `truth.jsonl` holds one
//! JSON object per shot.

use std::fs;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use super::{HarnessError, Manifest, ShotDataset, ShotRecord, ShotTruth};
use crate::imaging::ImagePair;

pub const MANIFEST_FILE: &str = "manifest.toml";
pub const FRAMES_FILE: &str = "frames.bin";
pub const TRUTH_FILE: &str = "truth.jsonl";

pub fn persist_dataset(dataset: &ShotDataset, dir: &Path) -> Result<(), HarnessError> {
    fs::create_dir_all(dir).map_err(HarnessError::io(dir))?;
    let manifest = toml::to_string(&dataset.manifest).map_err(|e| HarnessError::Serialize(e.to_string()))?;
    let path = dir.join(MANIFEST_FILE);
    fs::write(&path, manifest).map_err(HarnessError::io(&path))?;

    let path = dir.join(FRAMES_FILE);
    let file = fs::File::create(&path).map_err(HarnessError::io(&path))?;
    let mut w = BufWriter::new(file);
    for shot in &dataset.shots {
        for v in shot.images.frame2.iter().chain(&shot.images.frame1) {
            w.write_all(&v.to_le_bytes()).map_err(HarnessError::io(&path))?;
        }
    }
    w.flush().map_err(HarnessError::io(&path))?;

    let path = dir.join(TRUTH_FILE);
    if dataset.manifest.has_truth {
        let file = fs::File::create(&path).map_err(HarnessError::io(&path))?;
        let mut w = BufWriter::new(file);
        for shot in &dataset.shots {
            let t = shot
                .truth
                .as_ref()
                .ok_or_else(|| HarnessError::Corrupt(format!("shot {} has no truth record", shot.entry.index)))?;
            serde_json::to_writer(&mut w, t).map_err(|e| HarnessError::Serialize(e.to_string()))?;
            w.write_all(b"\n").map_err(HarnessError::io(&path))?;
        }
        w.flush().map_err(HarnessError::io(&path))?;
    } else if path.exists() {
        fs::remove_file(&path).map_err(HarnessError::io(&path))?;
    }
    Ok(())
}

pub fn load_dataset(dir: &Path) -> Result<ShotDataset, HarnessError> {
    let path = dir.join(MANIFEST_FILE);
    let text = fs::read_to_string(&path).map_err(HarnessError::io(&path))?;
    let manifest: Manifest =
        toml::from_str(&text).map_err(|e| HarnessError::Corrupt(format!("{}: {e}", path.display())))?;
    manifest
        .config
        .validate()
        .map_err(|e| HarnessError::Corrupt(format!("manifest config: {e}")))?;
    let g = manifest.geometry;
    if g != manifest.config.imaging.geometry {
        return Err(HarnessError::Corrupt("manifest geometry differs from its config".into()));
    }
    for (i, e) in manifest.shots.iter().enumerate() {
        if e.index != i || e.k > e.n_atoms || e.subset >= manifest.config.acquisition.subsets {
            return Err(HarnessError::Corrupt(format!("manifest shot entry {i} is inconsistent")));
        }
    }

    let path = dir.join(FRAMES_FILE);
    let bytes = fs::read(&path).map_err(HarnessError::io(&path))?;
    let per_shot = 2 * g.n_pixels() * 4;
    let expected = per_shot * manifest.shots.len();
    if bytes.len() != expected {
        return Err(HarnessError::Corrupt(format!(
            "{} holds {} bytes, manifest implies {expected}",
            path.display(),
            bytes.len()
        )));
    }
    let floats = |b: &[u8]| -> Vec<f32> {
        b.chunks_exact(4)
            .map(|c| f32::from_le_bytes([c[0], c[1], c[2], c[3]]))
            .collect()
    };

    let mut truth: Vec<Option<ShotTruth>> = vec![None; manifest.shots.len()];
    if manifest.has_truth {
        let path = dir.join(TRUTH_FILE);
        let file = fs::File::open(&path).map_err(HarnessError::io(&path))?;
        let mut n = 0;
        for (i, line) in BufReader::new(file).lines().enumerate() {
            let line = line.map_err(HarnessError::io(&path))?;
            let t: ShotTruth = serde_json::from_str(&line)
                .map_err(|e| HarnessError::Corrupt(format!("{} line {}: {e}", path.display(), i + 1)))?;
            let slot = truth
                .get_mut(i)
                .ok_or_else(|| HarnessError::Corrupt(format!("{} has extra lines", path.display())))?;
            if t.outcomes.len() != manifest.shots[i].n_atoms || t.positions.len() != t.outcomes.len() {
                return Err(HarnessError::Corrupt(format!("truth record {i} has the wrong atom count")));
            }
            *slot = Some(t);
            n += 1;
        }
        if n != manifest.shots.len() {
            return Err(HarnessError::Corrupt(format!(
                "{} has {n} records, manifest lists {}",
                path.display(),
                manifest.shots.len()
            )));
        }
    }

    let shots = manifest
        .shots
        .iter()
        .zip(bytes.chunks_exact(per_shot))
        .zip(truth)
        .map(|((entry, chunk), truth)| {
            let (f2, f1) = chunk.split_at(per_shot / 2);
            let images = ImagePair {
                geometry: g,
                frame2: floats(f2),
                frame1: floats(f1),
            };
            if !images.frame1.iter().chain(&images.frame2).all(|v| v.is_finite()) {
                return Err(HarnessError::Corrupt(format!("shot {} has non-finite pixels", entry.index)));
            }
            Ok(ShotRecord {
                entry: entry.clone(),
                images,
                truth,
            })
        })
        .collect::<Result<_, HarnessError>>()?;
    Ok(ShotDataset { manifest, shots })
}
