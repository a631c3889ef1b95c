package com.fixture.p1;

import static org.springframework.util.Assert.*;

public class TokenChecker {

  public void checkToken(String value) {
    hasText(value);
    notNull(value);
  }
}
