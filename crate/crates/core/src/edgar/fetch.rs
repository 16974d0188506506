use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use crate::error::{Error, Result};

use super::header::Accession;

/// Transport abstraction so the fetcher can run against HTTP, a fixture
/// server in tests, or nothing at all (cache-only mode).
pub trait Transport: Send + Sync {
    fn get(&self, url: &str, user_agent: &str) -> Result<Vec<u8>>;
}

#[derive(Debug, Clone)]
pub struct FetchConfig {
    pub base_url: String,
    /// SEC fair-access policy requires an identifying user agent.
    pub user_agent: String,
    pub max_retries: u32,
    /// Hard ceiling on request rate; SEC allows at most 10/s.
    pub requests_per_second: u32,
}

impl Default for FetchConfig {
    fn default() -> Self {
        FetchConfig {
            base_url: "https://www.sec.gov".to_owned(),
            user_agent: "proxy-align research tool (contact: set config.user_agent)".to_owned(),
            max_retries: 3,
            requests_per_second: 10,
        }
    }
}

/// Cache-first filing fetcher. Bytes are stored one file per accession
/// under `cache/<cik>/<accession>.txt`; repeated fetches never touch the
/// network. Construct with `transport: None` for cache-only operation.
pub struct FilingFetcher<T: Transport> {
    transport: Option<T>,
    cache_dir: PathBuf,
    config: FetchConfig,
    last_request: Mutex<Option<Instant>>,
}

impl<T: Transport> FilingFetcher<T> {
    pub fn new(cache_dir: impl Into<PathBuf>, transport: Option<T>, config: FetchConfig) -> Self {
        FilingFetcher {
            transport,
            cache_dir: cache_dir.into(),
            config,
            last_request: Mutex::new(None),
        }
    }

    pub fn cache_path(&self, cik: u64, accession: &Accession) -> PathBuf {
        self.cache_dir
            .join(cik.to_string())
            .join(format!("{accession}.txt"))
    }

    /// Fetch one filing's raw bytes, serving from cache when possible.
    pub fn fetch_filing(&self, cik: u64, accession: &Accession) -> Result<Vec<u8>> {
        let path = self.cache_path(cik, accession);
        if path.exists() {
            let bytes = fs::read(&path)?;
            if bytes.is_empty() {
                return Err(Error::Cache(format!(
                    "cached file {} is empty; delete it to refetch",
                    path.display()
                )));
            }
            return Ok(bytes);
        }
        let Some(transport) = &self.transport else {
            return Err(Error::Fetch {
                attempts: 0,
                message: format!("{accession} not cached and network is disabled"),
                retryable: true,
            });
        };
        let url = format!(
            "{}/Archives/edgar/data/{}/{}.txt",
            self.config.base_url.trim_end_matches('/'),
            cik,
            accession
        );
        let mut last_err = String::new();
        for attempt in 1..=self.config.max_retries.max(1) {
            self.throttle();
            match transport.get(&url, &self.config.user_agent) {
                Ok(bytes) if !bytes.is_empty() => {
                    write_atomic(&path, &bytes)?;
                    return Ok(bytes);
                }
                Ok(_) => last_err = "empty response body".to_owned(),
                Err(e) => last_err = e.to_string(),
            }
            log::warn!("fetch attempt {attempt} for {accession} failed: {last_err}");
        }
        Err(Error::Fetch {
            attempts: self.config.max_retries.max(1),
            message: format!("{url}: {last_err}"),
            retryable: true,
        })
    }

    fn throttle(&self) {
        let min_gap = Duration::from_secs_f64(1.0 / self.config.requests_per_second.max(1) as f64);
        let mut last = self.last_request.lock().expect("rate limiter lock");
        if let Some(prev) = *last {
            let elapsed = prev.elapsed();
            if elapsed < min_gap {
                std::thread::sleep(min_gap - elapsed);
            }
        }
        *last = Some(Instant::now());
    }
}

/// Write through a temp file and rename, so readers never observe a
/// partially written cache entry.
fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let parent = path
        .parent()
        .ok_or_else(|| Error::Cache("cache path has no parent".to_owned()))?;
    fs::create_dir_all(parent)?;
    let tmp = path.with_extension("txt.part");
    fs::write(&tmp, bytes)?;
    fs::rename(&tmp, path)?;
    Ok(())
}

/// Blocking HTTP transport used by the CLI.
#[cfg(feature = "net")]
pub struct HttpTransport {
    client: reqwest::blocking::Client,
}

#[cfg(feature = "net")]
impl HttpTransport {
    pub fn new() -> Result<Self> {
        let client = reqwest::blocking::Client::builder()
            .timeout(Duration::from_secs(30))
            .build()
            .map_err(|e| Error::Fetch {
                attempts: 0,
                message: format!("building HTTP client: {e}"),
                retryable: false,
            })?;
        Ok(HttpTransport { client })
    }
}

#[cfg(feature = "net")]
impl Transport for HttpTransport {
    fn get(&self, url: &str, user_agent: &str) -> Result<Vec<u8>> {
        let response = self
            .client
            .get(url)
            .header(reqwest::header::USER_AGENT, user_agent)
            .send()
            .map_err(|e| Error::Fetch {
                attempts: 1,
                message: e.to_string(),
                retryable: true,
            })?;
        if !response.status().is_success() {
            return Err(Error::Fetch {
                attempts: 1,
                message: format!("HTTP {} for {url}", response.status()),
                retryable: true,
            });
        }
        response
            .bytes()
            .map(|b| b.to_vec())
            .map_err(|e| Error::Fetch {
                attempts: 1,
                message: e.to_string(),
                retryable: true,
            })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::atomic::{AtomicU32, Ordering};

    struct MockTransport {
        calls: AtomicU32,
        payload: Option<Vec<u8>>,
    }

    impl Transport for &MockTransport {
        fn get(&self, _url: &str, _ua: &str) -> Result<Vec<u8>> {
            self.calls.fetch_add(1, Ordering::SeqCst);
            match &self.payload {
                Some(p) => Ok(p.clone()),
                None => Err(Error::Fetch {
                    attempts: 1,
                    message: "connection refused".into(),
                    retryable: true,
                }),
            }
        }
    }

    fn accession() -> Accession {
        Accession::new("0000921895-07-000903").unwrap()
    }

    #[test]
    fn fetch_caches_and_is_idempotent() {
        let dir = tempfile::tempdir().unwrap();
        let mock = MockTransport {
            calls: AtomicU32::new(0),
            payload: Some(b"FILING BODY".to_vec()),
        };
        let fetcher = FilingFetcher::new(dir.path(), Some(&mock), FetchConfig::default());
        let first = fetcher.fetch_filing(883979, &accession()).unwrap();
        let second = fetcher.fetch_filing(883979, &accession()).unwrap();
        assert_eq!(first, second, "byte-identical cached content");
        assert_eq!(mock.calls.load(Ordering::SeqCst), 1, "second call hits cache");
    }

    #[test]
    fn cache_hit_with_network_disabled() {
        let dir = tempfile::tempdir().unwrap();
        {
            let mock = MockTransport {
                calls: AtomicU32::new(0),
                payload: Some(b"BODY".to_vec()),
            };
            let fetcher = FilingFetcher::new(dir.path(), Some(&mock), FetchConfig::default());
            fetcher.fetch_filing(883979, &accession()).unwrap();
        }
        let offline: FilingFetcher<&MockTransport> =
            FilingFetcher::new(dir.path(), None, FetchConfig::default());
        assert_eq!(
            offline.fetch_filing(883979, &accession()).unwrap(),
            b"BODY".to_vec()
        );
    }

    #[test]
    fn cache_miss_offline_is_retryable() {
        let dir = tempfile::tempdir().unwrap();
        let offline: FilingFetcher<&MockTransport> =
            FilingFetcher::new(dir.path(), None, FetchConfig::default());
        match offline.fetch_filing(883979, &accession()) {
            Err(Error::Fetch { retryable, .. }) => assert!(retryable),
            other => panic!("expected retryable fetch error, got {other:?}"),
        }
    }

    #[test]
    fn retries_then_reports_attempts() {
        let dir = tempfile::tempdir().unwrap();
        let mock = MockTransport {
            calls: AtomicU32::new(0),
            payload: None,
        };
        let config = FetchConfig {
            max_retries: 3,
            requests_per_second: 1000,
            ..FetchConfig::default()
        };
        let fetcher = FilingFetcher::new(dir.path(), Some(&mock), config);
        match fetcher.fetch_filing(883979, &accession()) {
            Err(Error::Fetch { attempts, .. }) => assert_eq!(attempts, 3),
            other => panic!("expected fetch error, got {other:?}"),
        }
        assert_eq!(mock.calls.load(Ordering::SeqCst), 3);
    }

    #[test]
    fn empty_cache_file_is_corruption() {
        let dir = tempfile::tempdir().unwrap();
        let acc = accession();
        let path = dir.path().join("883979").join(format!("{acc}.txt"));
        fs::create_dir_all(path.parent().unwrap()).unwrap();
        fs::write(&path, b"").unwrap();
        let fetcher: FilingFetcher<&MockTransport> =
            FilingFetcher::new(dir.path(), None, FetchConfig::default());
        match fetcher.fetch_filing(883979, &acc) {
            Err(Error::Cache(_)) => {}
            other => panic!("expected cache corruption error, got {other:?}"),
        }
    }
}
