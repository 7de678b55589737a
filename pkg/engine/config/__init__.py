# Engine configuration package
