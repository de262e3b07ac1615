//! Sample streams on disk as little-endian interleaved `f32` I/Q pairs.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use crate::error::{invalid, Result};
use crate::Complex64;

/// Bytes per complex sample.
pub const BYTES_PER_SAMPLE: usize = 8;

pub fn write_iq<W: Write>(mut w: W, samples: &[Complex64]) -> Result<()> {
    for s in samples {
        w.write_all(&(s.re as f32).to_le_bytes())?;
        w.write_all(&(s.im as f32).to_le_bytes())?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_iq<R: Read>(mut r: R) -> Result<Vec<Complex64>> {
    let mut bytes = Vec::new();
    r.read_to_end(&mut bytes)?;
    if bytes.len() % BYTES_PER_SAMPLE != 0 {
        return Err(invalid(
            "iq stream",
            format!("{} bytes is not a whole number of I/Q pairs", bytes.len()),
        ));
    }
    let f = |b: &[u8]| f32::from_le_bytes([b[0], b[1], b[2], b[3]]) as f64;
    Ok(bytes
        .chunks_exact(BYTES_PER_SAMPLE)
        .map(|c| Complex64::new(f(&c[..4]), f(&c[4..])))
        .collect())
}

pub fn save_iq(path: impl AsRef<Path>, samples: &[Complex64]) -> Result<()> {
    write_iq(BufWriter::new(File::create(path)?), samples)
}

pub fn load_iq(path: impl AsRef<Path>) -> Result<Vec<Complex64>> {
    read_iq(BufReader::new(File::open(path)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn layout_is_i_then_q_little_endian() {
        let mut buf = Vec::new();
        write_iq(&mut buf, &[Complex64::new(1.0, -2.0)]).unwrap();
        assert_eq!(buf, [0, 0, 0x80, 0x3f, 0, 0, 0, 0xc0]);
    }

    #[test]
    fn round_trip_keeps_single_precision() {
        let x: Vec<Complex64> = (0..100)
            .map(|i| Complex64::new((i as f64 * 0.37).sin(), (i as f64 * 0.11).cos()))
            .collect();
        let mut buf = Vec::new();
        write_iq(&mut buf, &x).unwrap();
        assert_eq!(buf.len(), 100 * BYTES_PER_SAMPLE);
        let y = read_iq(buf.as_slice()).unwrap();
        for (a, b) in x.iter().zip(&y) {
            assert!((a - b).norm() < 1e-7);
        }
    }

    #[test]
    fn truncated_stream_is_rejected() {
        assert!(read_iq(&[0u8; 12][..]).is_err());
        assert!(read_iq(&[][..]).unwrap().is_empty());
    }
}
