//! Chat-completions transport over HTTP.

use std::time::Duration;

use conch_core::annotate::{LlmRequest, LlmTransport, TransportError};
use serde_json::{json, Value};
use ureq::Agent;

/// Posts OpenAI-style chat-completion requests to `url`.
pub struct HttpTransport {
    agent: Agent,
    url: String,
    key: Option<String>,
}

impl HttpTransport {
    pub fn new(url: impl Into<String>, key: Option<String>, timeout: Duration) -> Self {
        let agent: Agent =
            Agent::config_builder().timeout_global(Some(timeout)).http_status_as_error(false).build().into();
        Self { agent, url: url.into(), key }
    }
}

/// Pulls the assistant text out of a chat-completions response body.
pub fn completion_text(body: &Value) -> Option<&str> {
    body.pointer("/choices/0/message/content").and_then(Value::as_str)
}

impl LlmTransport for HttpTransport {
    fn complete(&self, request: &LlmRequest) -> Result<String, TransportError> {
        let body = json!({
            "model": request.model,
            "temperature": request.temperature,
            "messages": [
                {"role": "system", "content": request.system},
                {"role": "user", "content": request.user},
            ],
        });
        let mut req = self.agent.post(&self.url).header("Content-Type", "application/json");
        if let Some(key) = &self.key {
            req = req.header("Authorization", &format!("Bearer {key}"));
        }
        let mut resp = req.send_json(&body).map_err(|e| match e {
            ureq::Error::Timeout(_) | ureq::Error::Io(_) | ureq::Error::ConnectionFailed => {
                TransportError::Transient(e.to_string())
            }
            other => TransportError::Fatal(other.to_string()),
        })?;
        let status = resp.status().as_u16();
        if status == 429 || status >= 500 {
            return Err(TransportError::Transient(format!("HTTP {status}")));
        }
        if status >= 400 {
            return Err(TransportError::Fatal(format!("HTTP {status}")));
        }
        let parsed: Value = resp.body_mut().read_json().map_err(|e| TransportError::Fatal(e.to_string()))?;
        completion_text(&parsed)
            .map(str::to_string)
            .ok_or_else(|| TransportError::Fatal("response has no choices[0].message.content".into()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn extracts_message_content() {
        let body = json!({"choices": [{"message": {"role": "assistant", "content": "{\"cuts\": [2]}"}}]});
        assert_eq!(completion_text(&body), Some("{\"cuts\": [2]}"));
        assert_eq!(completion_text(&json!({"choices": []})), None);
    }
}
