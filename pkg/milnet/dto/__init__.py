"""File documents: model JSON, reports and key=value training configs."""
