"""Command handlers: each turns a CommandRequest into an emitted document."""
