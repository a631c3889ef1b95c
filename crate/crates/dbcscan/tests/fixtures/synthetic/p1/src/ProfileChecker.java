package com.fixture.p1;

import static org.springframework.util.Assert.*;

public class ProfileChecker {

  public void checkProfile(String value) {
    hasText(value);
    notNull(value);
  }
}
