//! On-disk memo table for intersection numbers. Big-endian binary layout:
//! magic `DRHC`, u32 version, u64 record count, then records of
//! `tag:u8 genus:u32 len:u32 psi[len]:u32 len:u32 ch[len]:u32 value`, where a
//! value is `sign:u8 len:u32 numerator-bytes len:u32 denominator-bytes`.

use std::io::{Read, Write};
use std::path::Path;

use num_bigint::{BigInt, Sign};
use rand::seq::SliceRandom;
use rand::SeedableRng;

use crate::engine::Engine;
use crate::error::{Error, Result};
use crate::exact::Rational;

pub const CACHE_VERSION: u32 = 1;
const MAGIC: &[u8; 4] = b"DRHC";

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct CacheStats {
    pub records: usize,
    pub reverified: usize,
}

fn put_u32(buf: &mut Vec<u8>, x: u32) {
    buf.extend_from_slice(&x.to_be_bytes());
}

fn put_big(buf: &mut Vec<u8>, x: &BigInt) {
    let (_, bytes) = x.to_bytes_be();
    put_u32(buf, bytes.len() as u32);
    buf.extend_from_slice(&bytes);
}

struct Reader<'a> {
    data: &'a [u8],
    pos: usize,
}

impl Reader<'_> {
    fn take(&mut self, n: usize) -> Result<&[u8]> {
        if self.pos + n > self.data.len() {
            return Err(Error::Cache("truncated cache file".into()));
        }
        let s = &self.data[self.pos..self.pos + n];
        self.pos += n;
        Ok(s)
    }

    fn u8(&mut self) -> Result<u8> {
        Ok(self.take(1)?[0])
    }

    fn u32(&mut self) -> Result<u32> {
        let b = self.take(4)?;
        Ok(u32::from_be_bytes([b[0], b[1], b[2], b[3]]))
    }

    fn u64(&mut self) -> Result<u64> {
        let b = self.take(8)?;
        let mut a = [0u8; 8];
        a.copy_from_slice(b);
        Ok(u64::from_be_bytes(a))
    }

    fn vec(&mut self) -> Result<Vec<u32>> {
        let n = self.u32()? as usize;
        (0..n).map(|_| self.u32()).collect()
    }

    fn big(&mut self, sign: Sign) -> Result<BigInt> {
        let n = self.u32()? as usize;
        Ok(BigInt::from_bytes_be(sign, self.take(n)?))
    }
}

type Record = (u8, u32, Vec<u32>, Vec<u32>, Rational);

impl Engine {
    fn records(&self) -> Vec<Record> {
        let mut out: Vec<Record> = self
            .psi_memo
            .iter()
            .map(|e| (0u8, e.key().0, e.key().1.clone(), Vec::new(), e.value().clone()))
            .collect();
        out.extend(
            self.ch_memo
                .iter()
                .map(|e| (1u8, e.key().0, e.key().1.clone(), e.key().2.clone(), e.value().clone())),
        );
        out.sort_by(|a, b| (a.0, a.1, &a.2, &a.3).cmp(&(b.0, b.1, &b.2, &b.3)));
        out
    }

    /// Writes the psi and Hodge memo tables.
    pub fn save_cache(&self, path: &Path) -> Result<usize> {
        let recs = self.records();
        let mut buf = Vec::new();
        buf.extend_from_slice(MAGIC);
        put_u32(&mut buf, CACHE_VERSION);
        buf.extend_from_slice(&(recs.len() as u64).to_be_bytes());
        for (tag, g, k, c, v) in &recs {
            buf.push(*tag);
            put_u32(&mut buf, *g);
            put_u32(&mut buf, k.len() as u32);
            for &x in k {
                put_u32(&mut buf, x);
            }
            put_u32(&mut buf, c.len() as u32);
            for &x in c {
                put_u32(&mut buf, x);
            }
            buf.push(match v.numer().sign() {
                Sign::Minus => 1,
                _ => 0,
            });
            put_big(&mut buf, v.numer());
            put_big(&mut buf, v.denom());
        }
        if let Some(dir) = path.parent() {
            std::fs::create_dir_all(dir)?;
        }
        let tmp = path.with_extension("tmp");
        std::fs::File::create(&tmp)?.write_all(&buf)?;
        std::fs::rename(&tmp, path)?;
        Ok(recs.len())
    }

    /// Loads a memo table written by [`Engine::save_cache`]. One percent of
    /// the records (at least one) are recomputed from scratch; any mismatch
    /// rejects the whole file.
    pub fn load_cache(&self, path: &Path, seed: u64) -> Result<CacheStats> {
        let mut data = Vec::new();
        std::fs::File::open(path)?.read_to_end(&mut data)?;
        let mut r = Reader { data: &data, pos: 0 };
        if r.take(4)? != MAGIC {
            return Err(Error::Cache("not a cache file".into()));
        }
        let version = r.u32()?;
        if version != CACHE_VERSION {
            return Err(Error::Cache(format!(
                "cache version {version} does not match {CACHE_VERSION}"
            )));
        }
        let count = r.u64()? as usize;
        let mut recs: Vec<Record> = Vec::with_capacity(count);
        for _ in 0..count {
            let tag = r.u8()?;
            let g = r.u32()?;
            let k = r.vec()?;
            let c = r.vec()?;
            let sign = if r.u8()? == 1 { Sign::Minus } else { Sign::Plus };
            let num = r.big(sign)?;
            let den = r.big(Sign::Plus)?;
            if tag > 1 || den == BigInt::from(0) {
                return Err(Error::Cache("corrupt record".into()));
            }
            recs.push((tag, g, k, c, Rational::new(num, den)));
        }
        let fresh = Engine::new();
        let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
        let sample = if recs.is_empty() { 0 } else { (recs.len() / 100).max(1) };
        for rec in recs.choose_multiple(&mut rng, sample) {
            let (tag, g, k, c, v) = rec;
            let recomputed = if *tag == 0 {
                fresh.psi_value(*g, k)
            } else {
                fresh.ch_correlator(*g, k, c)
            };
            if &recomputed != v {
                return Err(Error::Cache(format!(
                    "re-verification failed for genus {g} psi {k:?} ch {c:?}"
                )));
            }
        }
        for (tag, g, k, c, v) in recs.iter().cloned() {
            if tag == 0 {
                self.psi_memo.insert((g, k), v);
            } else {
                self.ch_memo.insert((g, k, c), v);
            }
        }
        Ok(CacheStats {
            records: recs.len(),
            reverified: sample,
        })
    }
}
