"""Cross-cutting CLI concerns: exit-status mapping and run logging."""
