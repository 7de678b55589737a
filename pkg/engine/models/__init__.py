# Pydantic models for formulas, distributions and reports
