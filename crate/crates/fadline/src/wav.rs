//! Minimal WAV support: 16-bit PCM mono only, which is all the effect
//! front end processes. Anything else is rejected with a format report.

use crate::{Error, Result, Sample};
use std::fs;
use std::path::Path;

/// Samples normalized to `[-1, 1)` plus the file's sample rate.
#[derive(Debug, Clone)]
pub struct WavData {
    pub samples: Vec<Sample>,
    pub fs: u32,
}

const SCALE: f64 = 32768.0;

/// Read a RIFF/WAVE file holding 16-bit PCM mono data. Unknown chunks
/// are skipped; a different format, channel count or bit depth is an
/// error naming what was found.
pub fn read_wav_mono16(path: &Path) -> Result<WavData> {
    let bytes = fs::read(path)?;
    parse_wav(&bytes)
}

fn parse_wav(bytes: &[u8]) -> Result<WavData> {
    if bytes.len() < 12 || &bytes[0..4] != b"RIFF" || &bytes[8..12] != b"WAVE" {
        return Err(Error::WavFormat("missing RIFF/WAVE header".into()));
    }
    let mut fs_hz = None;
    let mut data = None;
    let mut pos = 12;
    while pos + 8 <= bytes.len() {
        let id = &bytes[pos..pos + 4];
        let size = u32::from_le_bytes(bytes[pos + 4..pos + 8].try_into().unwrap()) as usize;
        let body_end = pos + 8 + size;
        if body_end > bytes.len() {
            return Err(Error::WavFormat(format!(
                "chunk {:?} overruns the file",
                String::from_utf8_lossy(id)
            )));
        }
        let body = &bytes[pos + 8..body_end];
        match id {
            b"fmt " => {
                if body.len() < 16 {
                    return Err(Error::WavFormat("fmt chunk too short".into()));
                }
                let format = u16::from_le_bytes(body[0..2].try_into().unwrap());
                let channels = u16::from_le_bytes(body[2..4].try_into().unwrap());
                let rate = u32::from_le_bytes(body[4..8].try_into().unwrap());
                let bits = u16::from_le_bytes(body[14..16].try_into().unwrap());
                if format != 1 || channels != 1 || bits != 16 {
                    return Err(Error::WavFormat(format!(
                        "need 16-bit PCM mono, file has format {format}, \
                         {channels} channel(s), {bits} bits"
                    )));
                }
                fs_hz = Some(rate);
            }
            b"data" => {
                let samples = body
                    .chunks_exact(2)
                    .map(|c| i16::from_le_bytes([c[0], c[1]]) as f64 / SCALE)
                    .collect();
                data = Some(samples);
            }
            _ => {}
        }
        // Chunks are word-aligned.
        pos = body_end + (size & 1);
    }
    match (fs_hz, data) {
        (Some(fs), Some(samples)) => Ok(WavData { samples, fs }),
        (None, _) => Err(Error::WavFormat("no fmt chunk".into())),
        (_, None) => Err(Error::WavFormat("no data chunk".into())),
    }
}

/// Write 16-bit PCM mono, saturating anything outside `[-1, 1)`.
pub fn write_wav_mono16(path: &Path, samples: &[Sample], fs: u32) -> Result<()> {
    let data_len = samples.len() * 2;
    let mut bytes = Vec::with_capacity(44 + data_len);
    bytes.extend_from_slice(b"RIFF");
    bytes.extend_from_slice(&(36 + data_len as u32).to_le_bytes());
    bytes.extend_from_slice(b"WAVE");
    bytes.extend_from_slice(b"fmt ");
    bytes.extend_from_slice(&16u32.to_le_bytes());
    bytes.extend_from_slice(&1u16.to_le_bytes()); // PCM
    bytes.extend_from_slice(&1u16.to_le_bytes()); // mono
    bytes.extend_from_slice(&fs.to_le_bytes());
    bytes.extend_from_slice(&(fs * 2).to_le_bytes()); // byte rate
    bytes.extend_from_slice(&2u16.to_le_bytes()); // block align
    bytes.extend_from_slice(&16u16.to_le_bytes());
    bytes.extend_from_slice(b"data");
    bytes.extend_from_slice(&(data_len as u32).to_le_bytes());
    for &s in samples {
        bytes.extend_from_slice(&saturate_i16(s).to_le_bytes());
    }
    fs::write(path, bytes)?;
    Ok(())
}

fn saturate_i16(s: Sample) -> i16 {
    (s * SCALE).round().clamp(-32768.0, 32767.0) as i16
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_is_bit_exact() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("rt.wav");
        let samples: Vec<f64> = (ps16()).map(|v| v as f64 / SCALE).collect();
        write_wav_mono16(&path, &samples, 44100).unwrap();
        let back = read_wav_mono16(&path).unwrap();
        assert_eq!(back.fs, 44100);
        assert_eq!(back.samples, samples);
    }

    fn ps16() -> impl Iterator<Item = i16> {
        (-600..600)
            .map(|k| (k * 54) as i16)
            .chain([i16::MIN, i16::MAX, 0])
    }

    #[test]
    fn saturation_clamps_overs() {
        assert_eq!(saturate_i16(2.0), i16::MAX);
        assert_eq!(saturate_i16(-2.0), i16::MIN);
        assert_eq!(saturate_i16(0.0), 0);
    }

    #[test]
    fn stereo_is_rejected_with_a_report() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("stereo.wav");
        // Hand-build a stereo header.
        let mut bytes = Vec::new();
        bytes.extend_from_slice(b"RIFF");
        bytes.extend_from_slice(&40u32.to_le_bytes());
        bytes.extend_from_slice(b"WAVE");
        bytes.extend_from_slice(b"fmt ");
        bytes.extend_from_slice(&16u32.to_le_bytes());
        bytes.extend_from_slice(&1u16.to_le_bytes());
        bytes.extend_from_slice(&2u16.to_le_bytes()); // stereo
        bytes.extend_from_slice(&44100u32.to_le_bytes());
        bytes.extend_from_slice(&(44100u32 * 4).to_le_bytes());
        bytes.extend_from_slice(&4u16.to_le_bytes());
        bytes.extend_from_slice(&16u16.to_le_bytes());
        bytes.extend_from_slice(b"data");
        bytes.extend_from_slice(&4u32.to_le_bytes());
        bytes.extend_from_slice(&[0, 0, 0, 0]);
        std::fs::write(&path, bytes).unwrap();

        let err = read_wav_mono16(&path).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("2 channel(s)"), "unhelpful report: {msg}");
    }

    #[test]
    fn garbage_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.wav");
        std::fs::write(&path, b"not a wav at all").unwrap();
        assert!(matches!(read_wav_mono16(&path), Err(Error::WavFormat(_))));
    }
}
