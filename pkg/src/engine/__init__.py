# SLQ engine: command orchestration and run artifacts
