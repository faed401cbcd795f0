//! "EEGB" container: magic, u32 channel count, u32 sample count, f64 rate,
//! u16 length-prefixed UTF-8 channel names, then row-major f64 samples.
//! Everything little-endian.

use std::fs;
use std::path::Path;

use super::csv::stem;
use super::{EegError, Epoch, MultichannelRecord};

pub const BINARY_MAGIC: [u8; 4] = *b"EEGB";

pub fn load_binary(path: impl AsRef<Path>) -> Result<Vec<Epoch>, EegError> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|source| EegError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let record = decode(&bytes).map_err(|e| e.at(path))?;
    Ok(vec![Epoch {
        record,
        label: None,
        subject_id: String::new(),
        epoch_id: stem(path),
    }])
}

pub fn save_binary(record: &MultichannelRecord, path: impl AsRef<Path>) -> Result<(), EegError> {
    let path = path.as_ref();
    fs::write(path, encode(record)).map_err(|source| EegError::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn encode(record: &MultichannelRecord) -> Vec<u8> {
    let mut out = Vec::with_capacity(20 + record.samples().len() * 8);
    out.extend_from_slice(&BINARY_MAGIC);
    out.extend_from_slice(&(record.n_channels() as u32).to_le_bytes());
    out.extend_from_slice(&(record.n_samples() as u32).to_le_bytes());
    out.extend_from_slice(&record.sample_rate().to_le_bytes());
    for name in record.channel_names() {
        out.extend_from_slice(&(name.len() as u16).to_le_bytes());
        out.extend_from_slice(name.as_bytes());
    }
    for v in record.samples() {
        out.extend_from_slice(&v.to_le_bytes());
    }
    out
}

enum DecodeError {
    BadMagic,
    Truncated { expected: usize, actual: usize },
    Malformed(String),
    Record(EegError),
}

impl DecodeError {
    fn at(self, path: &Path) -> EegError {
        let path = path.to_path_buf();
        match self {
            DecodeError::BadMagic => EegError::BadMagic { path },
            DecodeError::Truncated { expected, actual } => EegError::Truncated { path, expected, actual },
            DecodeError::Malformed(reason) => EegError::Malformed { path, reason },
            DecodeError::Record(e) => e,
        }
    }
}

struct Reader<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8], DecodeError> {
        if self.buf.len() - self.pos < n {
            return Err(DecodeError::Truncated {
                expected: self.pos + n,
                actual: self.buf.len(),
            });
        }
        let s = &self.buf[self.pos..self.pos + n];
        self.pos += n;
        Ok(s)
    }

    fn u16(&mut self) -> Result<u16, DecodeError> {
        Ok(u16::from_le_bytes(self.take(2)?.try_into().unwrap()))
    }

    fn u32(&mut self) -> Result<u32, DecodeError> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }

    fn f64(&mut self) -> Result<f64, DecodeError> {
        Ok(f64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }
}

fn decode(bytes: &[u8]) -> Result<MultichannelRecord, DecodeError> {
    if bytes.len() < 4 || bytes[..4] != BINARY_MAGIC {
        return Err(DecodeError::BadMagic);
    }
    let mut r = Reader { buf: bytes, pos: 4 };
    let channels = r.u32()? as usize;
    let samples = r.u32()? as usize;
    let sample_rate = r.f64()?;
    let mut names = Vec::with_capacity(channels);
    for _ in 0..channels {
        let len = r.u16()? as usize;
        let raw = r.take(len)?;
        let name = std::str::from_utf8(raw).map_err(|_| DecodeError::Malformed("channel name is not UTF-8".into()))?;
        names.push(name.to_string());
    }
    let payload = channels * samples * 8;
    let remaining = bytes.len() - r.pos;
    if remaining < payload {
        return Err(DecodeError::Truncated {
            expected: r.pos + payload,
            actual: bytes.len(),
        });
    }
    if remaining > payload {
        return Err(DecodeError::Malformed(format!(
            "{} trailing bytes after payload",
            remaining - payload
        )));
    }
    let values = (0..channels * samples)
        .map(|_| r.f64())
        .collect::<Result<Vec<_>, _>>()?;
    MultichannelRecord::new(values, names, sample_rate).map_err(DecodeError::Record)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn header(channels: u32, samples: u32, fs: f64, names: &[&str]) -> Vec<u8> {
        let mut b = BINARY_MAGIC.to_vec();
        b.extend_from_slice(&channels.to_le_bytes());
        b.extend_from_slice(&samples.to_le_bytes());
        b.extend_from_slice(&fs.to_le_bytes());
        for n in names {
            b.extend_from_slice(&(n.len() as u16).to_le_bytes());
            b.extend_from_slice(n.as_bytes());
        }
        b
    }

    #[test]
    fn header_plus_payload() {
        let mut b = header(2, 4, 512.0, &["Cz", "C3"]);
        for i in 0..8 {
            b.extend_from_slice(&(i as f64).to_le_bytes());
        }
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("x.eegb");
        fs::write(&p, &b).unwrap();
        let e = load_binary(&p).unwrap();
        let r = &e[0].record;
        assert_eq!((r.n_samples(), r.n_channels(), r.sample_rate()), (4, 2, 512.0));
        assert_eq!(r.channel(0), vec![0.0, 2.0, 4.0, 6.0]);
        assert_eq!(r.channel(1), vec![1.0, 3.0, 5.0, 7.0]);
    }

    #[test]
    fn three_bytes_is_bad_magic() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("short.eegb");
        fs::write(&p, b"EEG").unwrap();
        assert!(matches!(load_binary(&p), Err(EegError::BadMagic { .. })));
    }

    #[test]
    fn truncated_payload_reports_sizes() {
        let mut b = header(2, 4, 512.0, &["Cz", "C3"]);
        let head = b.len();
        b.extend_from_slice(&[0u8; 60]);
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("t.eegb");
        fs::write(&p, &b).unwrap();
        match load_binary(&p).unwrap_err() {
            EegError::Truncated { expected, actual, .. } => {
                assert_eq!(expected, head + 64);
                assert_eq!(actual, head + 60);
            }
            e => panic!("unexpected {e}"),
        }
    }
}
