use std::fs;
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex};
use std::time::Duration;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;
use tracing::{debug, warn};

/// One structured-output request. `prompt_id` names the step and the item
/// it concerns and is stable across runs, which is what record and replay
/// key on.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct LlmRequest {
    pub prompt_id: String,
    pub model: String,
    pub temperature: f64,
    pub system: String,
    pub user: String,
}

impl LlmRequest {
    /// Hex SHA-256 over model, temperature and both messages.
    pub fn fingerprint(&self) -> String {
        let mut h = Sha256::new();
        for part in [self.model.as_str(), &self.temperature.to_string(), &self.system, &self.user] {
            h.update((part.len() as u64).to_le_bytes());
            h.update(part.as_bytes());
        }
        hex(&h.finalize())
    }
}

pub(crate) fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

pub fn sha256_hex(text: &str) -> String {
    hex(&Sha256::digest(text.as_bytes()))
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TransportError {
    /// Worth retrying: timeouts, rate limits, 5xx.
    #[error("transient transport failure: {0}")]
    Transient(String),
    #[error("transport failure: {0}")]
    Fatal(String),
}

/// Sends one request and returns the model's raw text output.
pub trait LlmTransport: Send + Sync {
    fn complete(&self, request: &LlmRequest) -> Result<String, TransportError>;
}

impl<F> LlmTransport for F
where
    F: Fn(&LlmRequest) -> Result<String, TransportError> + Send + Sync,
{
    fn complete(&self, request: &LlmRequest) -> Result<String, TransportError> {
        self(request)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", default, deny_unknown_fields)]
pub struct LlmConfig {
    pub endpoint: String,
    pub model: String,
    pub temperature: f64,
    pub max_retries: u32,
    /// First backoff delay; doubles on each retry.
    pub backoff_ms: u64,
    /// Requests in flight at once.
    pub parallelism: usize,
}

impl Default for LlmConfig {
    fn default() -> Self {
        Self {
            endpoint: String::new(),
            model: "gpt-4".into(),
            temperature: 0.0,
            max_retries: 3,
            backoff_ms: 500,
            parallelism: 4,
        }
    }
}

/// Log line for one logical call (all attempts).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CallRecord {
    pub prompt_id: String,
    pub attempts: u32,
    /// Hex SHA-256 of the response text; absent when every attempt failed.
    pub response_sha256: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Error)]
#[error("LLM unavailable for {prompt_id} after {attempts} attempts: {last_error}")]
pub struct LlmUnavailable {
    pub prompt_id: String,
    pub attempts: u32,
    pub last_error: String,
}

pub struct LlmClient {
    config: LlmConfig,
    transport: Arc<dyn LlmTransport>,
    log: Mutex<Vec<CallRecord>>,
}

impl std::fmt::Debug for LlmClient {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("LlmClient").field("config", &self.config).finish_non_exhaustive()
    }
}

impl LlmClient {
    pub fn new(config: LlmConfig, transport: Arc<dyn LlmTransport>) -> Self {
        Self { config, transport, log: Mutex::new(Vec::new()) }
    }

    pub fn config(&self) -> &LlmConfig {
        &self.config
    }

    pub fn request(&self, prompt_id: String, system: &str, user: String) -> LlmRequest {
        LlmRequest {
            prompt_id,
            model: self.config.model.clone(),
            temperature: self.config.temperature,
            system: system.to_string(),
            user,
        }
    }

    /// Sends with retries. Transient failures back off exponentially; fatal
    /// ones stop immediately.
    pub fn call(&self, request: &LlmRequest) -> Result<String, LlmUnavailable> {
        let mut attempts = 0;
        let mut delay = Duration::from_millis(self.config.backoff_ms);
        let result = loop {
            attempts += 1;
            match self.transport.complete(request) {
                Ok(text) => break Ok(text),
                Err(TransportError::Transient(e)) if attempts <= self.config.max_retries => {
                    warn!(prompt = %request.prompt_id, attempt = attempts, error = %e, "retrying LLM call");
                    if !delay.is_zero() {
                        std::thread::sleep(delay);
                    }
                    delay *= 2;
                }
                Err(e) => break Err(e.to_string()),
            }
        };
        let response_sha256 = result.as_ref().ok().map(|t| sha256_hex(t));
        debug!(prompt = %request.prompt_id, attempts, hash = ?response_sha256, "LLM call");
        self.log.lock().expect("call log poisoned").push(CallRecord {
            prompt_id: request.prompt_id.clone(),
            attempts,
            response_sha256,
        });
        result.map_err(|last_error| LlmUnavailable { prompt_id: request.prompt_id.clone(), attempts, last_error })
    }

    /// Calls for every request with at most `parallelism` in flight.
    /// Results come back in request order whatever order they finish in.
    pub fn call_all(&self, requests: &[LlmRequest]) -> Vec<Result<String, LlmUnavailable>> {
        let workers = self.config.parallelism.max(1).min(requests.len().max(1));
        if workers == 1 {
            return requests.iter().map(|r| self.call(r)).collect();
        }
        let next = std::sync::atomic::AtomicUsize::new(0);
        let slots: Vec<Mutex<Option<Result<String, LlmUnavailable>>>> =
            requests.iter().map(|_| Mutex::new(None)).collect();
        std::thread::scope(|scope| {
            for _ in 0..workers {
                scope.spawn(|| loop {
                    let i = next.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
                    let Some(req) = requests.get(i) else { break };
                    let out = self.call(req);
                    *slots[i].lock().expect("slot poisoned") = Some(out);
                });
            }
        });
        slots.into_iter().map(|s| s.into_inner().expect("slot poisoned").expect("every slot filled")).collect()
    }

    /// Call log sorted by prompt id, so it does not depend on scheduling.
    pub fn call_log(&self) -> Vec<CallRecord> {
        let mut log = self.log.lock().expect("call log poisoned").clone();
        log.sort_by(|a, b| a.prompt_id.cmp(&b.prompt_id));
        log
    }
}

/// On-disk form of one recorded exchange.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Recording {
    pub prompt_id: String,
    pub request_sha256: String,
    pub response: String,
}

fn recording_path(dir: &Path, prompt_id: &str) -> PathBuf {
    let name: String =
        prompt_id.chars().map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '_' { c } else { '_' }).collect();
    // The hash keeps ids that sanitize to the same name apart.
    dir.join(format!("{name}.{}.json", &sha256_hex(prompt_id)[..8]))
}

/// Forwards to an inner transport and writes each successful response to
/// a directory.
pub struct RecordingTransport {
    inner: Arc<dyn LlmTransport>,
    dir: PathBuf,
}

impl RecordingTransport {
    pub fn new(inner: Arc<dyn LlmTransport>, dir: impl Into<PathBuf>) -> std::io::Result<Self> {
        let dir = dir.into();
        fs::create_dir_all(&dir)?;
        Ok(Self { inner, dir })
    }
}

impl LlmTransport for RecordingTransport {
    fn complete(&self, request: &LlmRequest) -> Result<String, TransportError> {
        let response = self.inner.complete(request)?;
        let rec = Recording {
            prompt_id: request.prompt_id.clone(),
            request_sha256: request.fingerprint(),
            response: response.clone(),
        };
        let mut body = serde_json::to_string_pretty(&rec).map_err(|e| TransportError::Fatal(e.to_string()))?;
        body.push('\n');
        fs::write(recording_path(&self.dir, &request.prompt_id), body)
            .map_err(|e| TransportError::Fatal(format!("cannot write recording: {e}")))?;
        Ok(response)
    }
}

/// Serves responses from a recording directory. A request whose
/// fingerprint differs from the recorded one is refused, so stale
/// recordings fail loudly instead of replaying the wrong answer.
pub struct ReplayTransport {
    dir: PathBuf,
}

impl ReplayTransport {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Self { dir: dir.into() }
    }
}

impl LlmTransport for ReplayTransport {
    fn complete(&self, request: &LlmRequest) -> Result<String, TransportError> {
        let path = recording_path(&self.dir, &request.prompt_id);
        let body = fs::read_to_string(&path).map_err(|e| {
            TransportError::Fatal(format!("no recording for {} at {}: {e}", request.prompt_id, path.display()))
        })?;
        let rec: Recording = serde_json::from_str(&body)
            .map_err(|e| TransportError::Fatal(format!("bad recording {}: {e}", path.display())))?;
        if rec.prompt_id != request.prompt_id || rec.request_sha256 != request.fingerprint() {
            return Err(TransportError::Fatal(format!(
                "recording for {} does not match the request",
                request.prompt_id
            )));
        }
        Ok(rec.response)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::atomic::{AtomicU32, Ordering};

    fn fast() -> LlmConfig {
        LlmConfig { backoff_ms: 0, ..Default::default() }
    }

    #[test]
    fn retries_transient_then_succeeds() {
        let n = Arc::new(AtomicU32::new(0));
        let n2 = n.clone();
        let t = move |_: &LlmRequest| {
            if n2.fetch_add(1, Ordering::SeqCst) < 2 {
                Err(TransportError::Transient("503".into()))
            } else {
                Ok("{\"ok\":true}".to_string())
            }
        };
        let client = LlmClient::new(fast(), Arc::new(t));
        let req = client.request("p1".into(), "sys", "user".into());
        assert_eq!(client.call(&req).unwrap(), "{\"ok\":true}");
        let log = client.call_log();
        assert_eq!(log[0].attempts, 3);
        assert_eq!(log[0].response_sha256.as_deref(), Some(sha256_hex("{\"ok\":true}").as_str()));
    }

    #[test]
    fn gives_up_after_max_retries() {
        let t = |_: &LlmRequest| Err(TransportError::Transient("timeout".into()));
        let client = LlmClient::new(LlmConfig { max_retries: 2, ..fast() }, Arc::new(t));
        let err = client.call(&client.request("p".into(), "s", "u".into())).unwrap_err();
        assert_eq!(err.attempts, 3);
        let t = |_: &LlmRequest| Err(TransportError::Fatal("401".into()));
        let client = LlmClient::new(fast(), Arc::new(t));
        assert_eq!(client.call(&client.request("p".into(), "s", "u".into())).unwrap_err().attempts, 1);
    }

    #[test]
    fn parallel_results_keep_request_order() {
        let t = |r: &LlmRequest| {
            // later requests finish first
            let i: u64 = r.prompt_id.parse().unwrap();
            std::thread::sleep(Duration::from_millis(20 - i));
            Ok(r.prompt_id.clone())
        };
        let client = LlmClient::new(fast(), Arc::new(t));
        let reqs: Vec<LlmRequest> = (0..10).map(|i| client.request(i.to_string(), "s", "u".into())).collect();
        let out: Vec<String> = client.call_all(&reqs).into_iter().map(Result::unwrap).collect();
        assert_eq!(out, (0..10).map(|i| i.to_string()).collect::<Vec<_>>());
    }

    #[test]
    fn record_then_replay() {
        let dir = tempfile::tempdir().unwrap();
        let live = |r: &LlmRequest| Ok(format!("answer to {}", r.user));
        let rec = RecordingTransport::new(Arc::new(live), dir.path()).unwrap();
        let client = LlmClient::new(fast(), Arc::new(rec));
        let req = client.request("segment:t1".into(), "s", "hello".into());
        let first = client.call(&req).unwrap();
        let replay = LlmClient::new(fast(), Arc::new(ReplayTransport::new(dir.path())));
        assert_eq!(replay.call(&req).unwrap(), first);
        let changed = replay.request("segment:t1".into(), "s", "different".into());
        assert!(replay.call(&changed).is_err());
    }
}
