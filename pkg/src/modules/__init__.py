# Engine modules package
